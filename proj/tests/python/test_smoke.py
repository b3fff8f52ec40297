"""End-to-end smoke checks for the python surface of the simulator."""

import math

import pytest

import qav


def lean_config(protocol, n, l, seed):
    cfg = qav.Config()
    cfg.protocol = protocol
    cfg.voters = n
    cfg.l = l
    cfg.delta0 = 0.0
    cfg.delta1 = 0.0
    cfg.qds = False
    cfg.record_transcript = False
    cfg.seed = seed
    return cfg


def test_single_run_reports_the_veto():
    out = qav.run(lean_config("rkqav", 4, 3, 42), "0100")
    assert out["result"] == 1
    assert out["conclusive"] is True
    assert out["aborted"] is False


def test_unanimous_consensus_is_clean():
    out = qav.run(lean_config("qav7", 3, 1, 7), "000")
    assert out["result"] == 0
    assert out["iterations"] == 1


def test_transcripts_come_back_as_tuples():
    cfg = lean_config("qav6", 3, 2, 9)
    cfg.record_transcript = True
    out = qav.run(cfg, "001")
    kinds = {record[2] for record in out["transcript"]}
    assert "vote-encode" in kinds
    assert all(len(record) == 4 for record in out["transcript"])


def test_random_votes_are_seeded():
    votes = qav.random_votes(6, 2, 123)
    assert len(votes) == 6
    assert votes.count("1") == 2
    assert votes == qav.random_votes(6, 2, 123)


def test_state_amplitudes_are_normalized():
    for kind, n in [("ghz", 3), ("bell", 0), ("cluster4", 0)]:
        amps = qav.state_amplitudes(kind, n)
        assert math.isclose(sum(abs(a) ** 2 for a in amps), 1.0, abs_tol=1e-12)


def test_kraus_operators_are_complete():
    ops = qav.kraus_operators("amplitude", 0.3)
    total = [[0.0, 0.0], [0.0, 0.0]]
    for op in ops:
        for row in range(2):
            for col in range(2):
                total[row][col] += sum(
                    op[k][row].conjugate() * op[k][col] for k in range(2)
                ).real
    assert math.isclose(total[0][0], 1.0, abs_tol=1e-12)
    assert math.isclose(total[1][1], 1.0, abs_tol=1e-12)
    assert abs(total[0][1]) < 1e-12


def test_fidelity_columns_agree():
    closed = qav.fidelity_closed_form("qav1", 4, "amplitude", 0.2)
    numeric = qav.average_fidelity_numeric("qav1", 4, "amplitude", 0.2)
    assert math.isclose(closed, numeric, abs_tol=1e-9)
    sweep = qav.fidelity_sweep("qav2", 4, "phase", [0.0, 0.5, 1.0])
    assert [point["eta"] for point in sweep] == [0.0, 0.5, 1.0]
    assert all(point["abs_diff"] <= 1e-9 for point in sweep)


def test_efficiency_first_row():
    rows = qav.efficiency_table(4)
    assert len(rows) == 9
    assert rows[0]["protocol"] == "rkqav"
    assert rows[0]["eta"] == (1, 200)


def test_attack_experiment_detects_the_probe():
    report = qav.attack_experiment(
        "entangle-measure", beta2=1.0, decoys=10, trials=500, seed=11
    )
    assert report["decoy_units"] == 5000
    assert abs(report["per_decoy_error_rate"] - 0.5) < 0.05


def test_success_experiment_tracks_key_length():
    res = qav.success_experiment(lean_config("qav2", 4, 8, 13), 2, 2000)
    assert res["expected"] == pytest.approx(1.0 - 2.0**-8)
    assert abs(res["rate"] - res["expected"]) < 4.0 * res["sigma"]


def test_iteration_profile_shape():
    assert qav.iteration_profile("qav6", 4, seed=3) == [3, 1, 2, 1, 3]


def test_bad_config_raises_value_error():
    cfg = lean_config("qav2", 1, 8, 1)
    with pytest.raises(ValueError):
        qav.run(cfg, "0")
    with pytest.raises(ValueError):
        qav.fidelity_closed_form("rkqav", 4, "amplitude", 0.1)


def test_vote_length_must_match():
    with pytest.raises(ValueError):
        qav.run(lean_config("qav2", 4, 8, 1), "01")
