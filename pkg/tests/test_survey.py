import csv
import json
from math import ceil, pi

import pytest

from oracles import is_prime
from pvshort.errors import EmptyRecordsError, OracleFailure
from pvshort.survey import (
    LEMMA_HEADER,
    SurveyConfig,
    emit_plot_data,
    load_config,
    read_survey_csv,
    run_decomposition_survey,
    run_lemma_survey,
    run_theorem_survey,
    sample_characters,
    select_moduli,
)


def cfg(tmp_path, **kw):
    kw.setdefault("worker_count", 1)
    return SurveyConfig(output_dir=str(tmp_path), **kw)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_defaults():
    c = SurveyConfig()
    assert c.q_range == (500, 3000) and c.characters_per_modulus == 50
    assert c.gamma_grid == (0.0, 0.1, 0.2, 0.3) and c.alpha_grid_size == 200


def test_config_file_and_env(tmp_path):
    f = tmp_path / "survey.cfg"
    f.write_text("q_range = 10, 40  # inclusive\nq_filter = all\ngamma_grid = 0, 0.2\nseed = 3\n")
    c = load_config(f, env={})
    assert c.q_range == (10, 40) and c.q_filter == "all" and c.gamma_grid == (0.0, 0.2)
    c = load_config(f, env={"PVSHORT_SEED": "9", "PVSHORT_CHARACTERS_PER_MODULUS": "all"})
    assert c.seed == 9 and c.characters_per_modulus == "all"
    assert load_config(f, env={"PVSHORT_SEED": "9"}, seed=4).seed == 4


def test_config_rejects_unknown_and_invalid(tmp_path):
    f = tmp_path / "bad.cfg"
    f.write_text("colour = blue\n")
    with pytest.raises(ValueError):
        load_config(f, env={})
    with pytest.raises(ValueError):
        SurveyConfig(gamma_grid=(0.2, 0.1))
    with pytest.raises(ValueError):
        SurveyConfig(q_filter="odd")


def test_fingerprint_ignores_paths_and_workers():
    assert SurveyConfig(output_dir="a", worker_count=1).fingerprint() == \
        SurveyConfig(output_dir="b", worker_count=4).fingerprint()
    assert SurveyConfig(seed=1).fingerprint() != SurveyConfig(seed=2).fingerprint()


def test_select_moduli():
    c = SurveyConfig(q_range=(500, 600))
    assert select_moduli(c) == [q for q in range(500, 601) if is_prime(q)]


def test_sampling_reproducible_and_independent_of_range():
    a = sample_characters(1009, SurveyConfig(q_range=(1000, 1010), seed=5))
    b = sample_characters(1009, SurveyConfig(q_range=(3, 2000), seed=5))
    c = sample_characters(1009, SurveyConfig(seed=6))
    assert a == b and a != c and len(a) == 50 and a == sorted(a)


def test_theorem_survey_q5(tmp_path):
    recs, path = run_theorem_survey(cfg(tmp_path, q_range=(5, 5), gamma_grid=(0.0,)))
    assert len(recs) == 3
    assert read_survey_csv(path) == recs


def test_theorem_survey_rows(tmp_path):
    c = cfg(tmp_path, q_range=(200, 400), q_filter="all", characters_per_modulus=5,
            gamma_grid=(0.0, 0.2, 1 / 3))
    recs, path = run_theorem_survey(c)
    assert read_survey_csv(path) == recs
    keys = [(r.q, tuple(map(int, r.label.split(":")[1].split(","))), r.gamma) for r in recs]
    assert keys == sorted(keys)
    for r in recs:
        if r.gamma == 1 / 3:
            assert r.argmax_n <= ceil(r.q ** (2 / 3))
    by = {}
    for r in recs:
        by.setdefault(r.label, []).append(r.max_ratio)
    assert all(v == sorted(v, reverse=True) for v in by.values())


def test_theorem_survey_deterministic_across_workers(tmp_path):
    kw = dict(q_range=(500, 700), characters_per_modulus=7)
    _, p1 = run_theorem_survey(cfg(tmp_path / "a", worker_count=1, **kw))
    _, p2 = run_theorem_survey(cfg(tmp_path / "b", worker_count=2, **kw))
    assert p1.read_bytes() == p2.read_bytes()


def test_resume_after_interruption(tmp_path):
    c = cfg(tmp_path, q_range=(500, 800), characters_per_modulus=4)
    _, path = run_theorem_survey(c)
    full = path.read_bytes()
    shards = sorted((tmp_path / ".shards").glob("theorem-*/*.json"))
    for s in shards[len(shards) // 2:]:
        s.unlink()
    path.unlink()
    _, path = run_theorem_survey(c)
    assert path.read_bytes() == full
    # rerunning over a complete output directory never duplicates rows
    _, path = run_theorem_survey(c)
    assert path.read_bytes() == full


def test_plot_data(tmp_path):
    recs, _ = run_theorem_survey(cfg(tmp_path, q_range=(500, 600), characters_per_modulus=6))
    p = emit_plot_data(recs, "ratio_vs_gamma", tmp_path)
    rows = read_rows(p)
    assert len(rows) == len({(r.gamma, r.parity) for r in recs})
    for row in rows:
        g = float(row["gamma"])
        c = 1 / pi if row["parity"] == "odd" else 2 / pi**2
        assert float(row["bound"]) == pytest.approx(c * (1 / 3 - g + 0.05), rel=1e-15)
    rows = read_rows(emit_plot_data(recs, "argmax_location", tmp_path))
    assert len(rows) == len({r.label for r in recs})
    assert all(0 < float(r["argmaxN_over_q"]) < 1 for r in rows)
    with pytest.raises(EmptyRecordsError):
        emit_plot_data([], "ratio_vs_gamma", tmp_path)
    with pytest.raises(ValueError):
        emit_plot_data(recs, "histogram", tmp_path)


def test_lemma_survey(tmp_path):
    c = cfg(tmp_path, q_range=(10**6, 10**6), q_filter="all", gamma_grid=(0.0, 1 / 3),
            alpha_grid_size=20)
    paths = run_lemma_survey(c)
    assert [p.name for p in paths] == ["lemma_eq1.csv", "lemma_eq2.csv", "lemma_eq3.csv", "lemma_eq4.csv"]
    for p in paths[:3]:
        rows = read_rows(p)
        assert tuple(rows[0].keys()) == LEMMA_HEADER
        failed = [r for r in rows if float(r["gamma"]) == 1 / 3]
        assert failed and all(r["holds"] == "precondition_failed" and r["lhs"] == "" for r in failed)
    for name in ("lemma_eq1.csv", "lemma_eq2.csv"):
        zero = [r for r in read_rows(tmp_path / name) if float(r["alpha"]) == 0 and r["lhs"]]
        assert zero and all(float(r["lhs"]) == 0 for r in zero)
    for name in ("lemma_eq3.csv", "lemma_eq4.csv"):
        ok = [r for r in read_rows(tmp_path / name) if r["holds"] != "precondition_failed"]
        assert ok and all(r["holds"] == "true" for r in ok)


def test_lemma_survey_default_eq4_holds(tmp_path):
    paths = run_lemma_survey(cfg(tmp_path, q_range=(500, 700), alpha_grid_size=50))
    rows = [r for r in read_rows(paths[3]) if r["holds"] != "precondition_failed"]
    assert rows and all(r["holds"] == "true" for r in rows)
    # only cells where no odd p fits at all are flagged for eq. (4)
    assert {float(r["gamma"]) for r in rows} >= {0.0, 0.1, 0.2}
    # eq. (1)-(3) need the range precondition, which small q often miss
    assert any(r["holds"] == "precondition_failed" for r in read_rows(paths[0]))


def test_decomposition_survey_count(tmp_path):
    c = cfg(tmp_path, q_range=(500, 1500), characters_per_modulus=10, gamma_grid=(0.0, 0.2))
    reps, jpath, cpath = run_decomposition_survey(c)
    n_primes = sum(1 for q in range(500, 1501) if is_prime(q))
    assert len(reps) == n_primes * 10 * 2 * 3
    assert all(r.partition_ok() for r in reps)
    from pvshort.decomposition import DecompositionReport

    back = [DecompositionReport.from_dict(d) for d in json.loads(jpath.read_text())]
    assert back == reps
    assert len(read_rows(cpath)) == len(reps)


def test_decomposition_oracle_failure_is_hard_error(tmp_path, monkeypatch):
    import pvshort.survey as S

    real = S.reconstruct_via_inversion
    monkeypatch.setattr(S, "reconstruct_via_inversion", lambda lab, N: real(lab, N) + 1)
    with pytest.raises(OracleFailure, match=r"q=11, label=11:\d+, N=\d+"):
        run_decomposition_survey(cfg(tmp_path, q_range=(11, 11)))
