import json

from cil.demo import CORPUS, DEMO_CONFIG, check_inference, demo_config, run_demo
from cil.model import ModelError, config_from_json


def test_demo_outcomes():
    outcomes = run_demo()
    assert len(outcomes) == len(CORPUS) + 2
    assert all(o.ok for o in outcomes), [o for o in outcomes if not o.ok]


def test_substitutivity_failures_have_actual_counterexamples():
    cfg = demo_config()
    for inf in CORPUS:
        if inf.expect == "fails":
            o = check_inference(cfg, inf)
            assert o.premises_hold and not o.conclusion_holds


def test_valid_inferences_fail_nowhere():
    cfg = demo_config()
    for inf in CORPUS:
        if inf.expect == "valid":
            assert check_inference(cfg, inf).ok


def test_breaking_the_model_is_detected():
    # drop the believed proposition from Tr: the first valid inference must break
    doc = json.loads(json.dumps(DEMO_CONFIG))
    doc["extensions"]["actual"]["Tr"] = [["rain"]]
    cfg = config_from_json(doc)
    assert not check_inference(cfg, CORPUS[0]).ok
