import json
import math

import numpy as np
import pytest

from ptail.cli import main, load_losses
from ptail.errors import DataError


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_load_losses_plain(tmp_path):
    path = write(tmp_path, "a.csv", "1.0\n2.5\n3.0\n")
    ds = load_losses(path, 0, False)
    assert list(ds.values.values) == [1.0, 2.5, 3.0]
    assert ds.n_dropped == 0


def test_load_losses_header_and_bad_rows(tmp_path):
    path = write(tmp_path, "b.csv", "loss\n1.0\nx\n2.0\n")
    ds = load_losses(path, 0, True)
    assert list(ds.values.values) == [1.0, 2.0]
    assert ds.n_dropped == 1


def test_load_losses_column_select(tmp_path):
    path = write(tmp_path, "c.csv", "a,b\n1,10\n2,20\n")
    ds = load_losses(path, 1, True)
    assert list(ds.values.values) == [10.0, 20.0]


def test_load_losses_too_few_rows(tmp_path):
    path = write(tmp_path, "d.csv", "1.0\n")
    with pytest.raises(DataError):
        load_losses(path, 0, False)


def test_estimate_json(tmp_path, capsys):
    path = write(tmp_path, "x.csv", "1\n2\n4\n8\n")
    code, out, _ = run_cli(capsys, "estimate", "--input", path, "--p", "2", "--k", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 4
    assert payload["gamma_hat"] == pytest.approx(0.774963, abs=1e-6)
    assert "ci_lower" not in payload

    code, out, _ = run_cli(capsys, "estimate", "--input", path, "--p", "1", "--k", "2")
    assert json.loads(out)["gamma_hat"] == pytest.approx(1.039721, abs=1e-6)


def test_estimate_with_ci(tmp_path, capsys):
    path = write(tmp_path, "x.csv", "\n".join(str(2.0**i) for i in range(60)) + "\n")
    code, out, _ = run_cli(capsys, "estimate", "--input", path, "--p", "1", "--k", "10",
                           "--ci", "0.95")
    assert code == 0
    payload = json.loads(out)
    assert payload["ci_level"] == 0.95
    assert payload["ci_lower"] <= payload["gamma_hat"] <= payload["ci_upper"]


def test_estimate_scale_invariance_end_to_end(tmp_path, capsys):
    rng = np.random.default_rng(8)
    vals = np.exp(rng.standard_exponential(300))
    p1 = write(tmp_path, "raw.csv", "\n".join(repr(float(v)) for v in vals) + "\n")
    p2 = write(tmp_path, "kilo.csv", "\n".join(repr(float(v)) for v in vals * 1000.0) + "\n")
    _, out1, _ = run_cli(capsys, "estimate", "--input", p1, "--p", "2", "--k", "50")
    _, out2, _ = run_cli(capsys, "estimate", "--input", p2, "--p", "2", "--k", "50")
    g1 = json.loads(out1)["gamma_hat"]
    g2 = json.loads(out2)["gamma_hat"]
    assert g2 == pytest.approx(g1, rel=1e-10)


def test_estimate_negative_threshold_exit2(tmp_path, capsys):
    path = write(tmp_path, "neg.csv", "-5\n1\n2\n4\n")
    code, _, err = run_cli(capsys, "estimate", "--input", path, "--p", "1", "--k", "3")
    assert code == 2
    assert "threshold" in err


def test_estimate_missing_file_exit2(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "estimate", "--input", str(tmp_path / "nope.csv"),
                         "--p", "1", "--k", "2")
    assert code == 2


def test_usage_error_exit1(capsys):
    with pytest.raises(SystemExit) as err:
        main(["estimate", "--p", "1"])
    assert err.value.code == 1
    capsys.readouterr()


def test_table_csv_golden_header_and_rerun(tmp_path, capsys):
    out = tmp_path / "t.csv"
    args = ["table", "--model", "strict-pareto:gamma=1.0", "--n", "200", "--reps", "50",
            "--p", "1,2", "--k", "10,20", "--seed", "42", "--out", str(out)]
    assert main(args) == 0
    text1 = out.read_bytes()
    lines = text1.decode().splitlines()
    assert lines[0] == "p,k,mean,mse,se_mean"
    assert len(lines) == 5
    assert lines[1].startswith("1,10,")
    assert lines[2].startswith("1,20,")
    assert lines[3].startswith("2,10,")
    assert main(args) == 0
    assert out.read_bytes() == text1
    capsys.readouterr()


def test_table_bad_model_exit1(tmp_path, capsys):
    code = main(["table", "--model", "bogus:gamma=1", "--n", "100", "--reps", "5",
                 "--p", "1", "--k", "10", "--out", str(tmp_path / "t.csv")])
    assert code == 1
    capsys.readouterr()


def test_table_k_too_large_exit1(tmp_path, capsys):
    code = main(["table", "--model", "strict-pareto:gamma=1.0", "--n", "100", "--reps", "5",
                 "--p", "1", "--k", "100", "--out", str(tmp_path / "t.csv")])
    assert code == 1
    capsys.readouterr()


def test_hillplot_golden(tmp_path, capsys):
    path = write(tmp_path, "x.csv", "1\n2\n4\n8\n")
    out = tmp_path / "h.csv"
    code = main(["hillplot", "--input", path, "--p", "1", "--kmin", "1", "--kmax", "2",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "p,k,gamma_hat,inv_gamma_hat"
    assert lines[1] == "1,1,0.693147,1.442695"
    assert lines[2] == "1,2,1.039721,0.961797"
    capsys.readouterr()


def test_hillplot_geometric_sample(tmp_path, capsys):
    r = 2.0
    path = write(tmp_path, "g.csv", "\n".join(str(r**i) for i in range(1, 30)) + "\n")
    out = tmp_path / "h.csv"
    assert main(["hillplot", "--input", path, "--p", "1", "--kmin", "1", "--kmax", "10",
                 "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    # exact geometric spacings: the Hill value at k is log(r)*(k+1)/2
    for row in rows:
        _, k, g, _ = row.split(",")
        assert float(g) == pytest.approx(math.log(r) * (int(k) + 1) / 2.0, abs=1e-6)
    capsys.readouterr()


def test_hillplot_kmax_exit1_and_positivity_exit2(tmp_path, capsys):
    path = write(tmp_path, "x.csv", "1\n2\n4\n8\n")
    code = main(["hillplot", "--input", path, "--p", "1", "--kmin", "1", "--kmax", "4",
                 "--out", str(tmp_path / "h.csv")])
    assert code == 1
    neg = write(tmp_path, "neg.csv", "-1\n1\n2\n4\n8\n")
    code = main(["hillplot", "--input", neg, "--p", "1", "--kmin", "1", "--kmax", "4",
                 "--out", str(tmp_path / "h.csv")])
    assert code == 2
    _, err = capsys.readouterr()
    assert "k=4" in err


def test_hillplot_rerun_byte_identical(tmp_path, capsys):
    rng = np.random.default_rng(1)
    path = write(tmp_path, "x.csv", "\n".join(repr(float(v)) for v in np.exp(rng.standard_exponential(500))))
    out = tmp_path / "h.csv"
    args = ["hillplot", "--input", path, "--p", "1,5", "--kmin", "5", "--kmax", "100",
            "--out", str(out)]
    assert main(args) == 0
    first = out.read_bytes()
    assert main(args) == 0
    assert out.read_bytes() == first
    rows = first.decode().splitlines()
    assert len(rows) == 1 + 2 * 96
    capsys.readouterr()


def test_verify_mbound(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["verify", "--suite", "mbound", "--seed", "7", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["suite"] == "mbound"
    assert payload["pass"] is True
    assert set(payload["statistics"]) == set(payload["thresholds"])
    capsys.readouterr()


def test_verify_lln_small(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["verify", "--suite", "lln", "--seed", "7", "--n", "100000",
                 "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["pass"] is True
    assert "rel_err_p1" in payload["statistics"]
    capsys.readouterr()


def test_verify_unknown_suite_exit1(tmp_path, capsys):
    with pytest.raises(SystemExit) as err:
        main(["verify", "--suite", "bogus", "--out", str(tmp_path / "r.json")])
    assert err.value.code == 1
    capsys.readouterr()
