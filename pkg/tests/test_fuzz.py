from linpreserve.fuzz import run_campaign


def test_campaign_finds_no_anomalies():
    for n in (2, 3, 4):
        out = run_campaign(n, 3, seed=40 + n, checks_per_map=3)
        assert out["verdict"] == "pass", out["entries"]
        assert [e["seed"] for e in out["entries"]] == [40 + n + i for i in range(3)]
        for entry in out["entries"]:
            assert set(entry["canonical"].values()) == {"pass"}
            assert set(entry["perturbed"].values()) == {"fail"}
            if n >= 3:
                assert entry["decompose"] == "recovered"
                assert entry["decompose_perturbed"] == "rejected"


def test_campaign_is_deterministic():
    assert run_campaign(3, 2, seed=9) == run_campaign(3, 2, seed=9)
