import subprocess
import sys

import pytest

from margin_mcmc.cli import emit_csv, main, parse_args
from margin_mcmc.datasets import finch, load_dataset
from margin_mcmc.matrix import MatrixFormatError, parse_matrices

# recounted by hand from the finch occurrence table (species rows, islands A..Q)
FINCH_ROW_SUMS = (14, 13, 14, 10, 12, 2, 10, 1, 10, 11, 6, 2, 17)
FINCH_COL_SUMS = (4, 4, 11, 10, 10, 8, 9, 10, 8, 9, 4, 9, 4, 7, 9, 3, 3)


def test_parse_sample_args():
    args = parse_args(["sample", "--input", "a.txt", "--algorithm", "swap",
                       "--iterations", "100", "--seed", "7"])
    assert (args.command, args.algorithm, args.iterations, args.seed) == ("sample", "swap", 100, 7)
    assert args.thin == 1 and args.burn_in == 0


def test_bad_algorithm_is_usage_error(capsys):
    code = main(["sample", "--input", "a.txt", "--algorithm", "frobnicate", "--iterations", "1"])
    assert code == 2
    assert "rectangle-loop" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["sample", "--input", "a.txt", "--algorithm", "swap"],
    ["sample", "--input", "a.txt", "--algorithm", "swap", "--iterations", "x"],
    ["sample", "--input", "a.txt", "--algorithm", "swap", "--iterations", "5", "--thin", "0"],
    ["enumerate", "--row-sums", "1,a", "--col-sums", "1,1"],
    ["kernel", "--row-sums", "1,1", "--col-sums", "1,1", "--bogus"],
])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_estimate_uses_embedded_finch():
    args = parse_args(["estimate", "--input", "finch", "--stat", "s2", "--iterations", "10"])
    assert load_dataset(args.input).shape == (13, 17)


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("MARGIN_MCMC_SEED", "31")
    args = parse_args(["sample", "--input", "a", "--algorithm", "swap", "--iterations", "1"])
    assert args.seed == 31


def test_finch_dataset():
    a = finch()
    assert a.shape == (13, 17)
    assert a.row_sums == FINCH_ROW_SUMS
    assert a.col_sums == FINCH_COL_SUMS
    assert a.row_sums[12] == 17


def test_load_dataset_reports_bad_cell(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0 1\n1 2\n")
    with pytest.raises(MatrixFormatError, match="line 2, column 2"):
        load_dataset(path)
    assert main(["sample", "--input", str(path), "--algorithm", "swap", "--iterations", "1"]) == 3


def test_missing_input_is_data_error(tmp_path):
    assert main(["sample", "--input", str(tmp_path / "nope.txt"), "--algorithm", "swap",
                 "--iterations", "1"]) == 3


def test_emit_csv_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([], ["k", "tv", "log10_tv"], str(path))
    assert path.read_bytes() == b"k,tv,log10_tv\n"


def test_enumerate_command(capsys):
    assert main(["enumerate", "--row-sums", "1,2,1", "--col-sums", "1,2,1", "--dump"]) == 0
    out = capsys.readouterr().out
    count, rest = out.split("\n", 1)
    assert count == "5"
    assert len(parse_matrices(rest)) == 5


def test_enumerate_cap_is_data_error():
    assert main(["enumerate", "--row-sums", "1,1,1", "--col-sums", "1,1,1", "--cap", "3"]) == 3


def test_kernel_command(tmp_path):
    out = tmp_path / "k.csv"
    assert main(["kernel", "--row-sums", "1,2,1", "--col-sums", "1,2,1",
                 "--algorithm", "swap", "--output", str(out), "--cap", "100"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# margin_mcmc=")
    header = lines[1].split(",")
    assert header[0] == "state" and len(header) == 6
    a_row = [r for r in lines[2:] if r.startswith("010101010,")][0].split(",")
    assert sorted(a_row[1:]) == ["1/9", "1/9", "1/9", "1/9", "5/9"]


def test_kernel_infeasible_is_data_error():
    assert main(["kernel", "--row-sums", "2,2", "--col-sums", "1,1,1", "--algorithm", "swap"]) == 3


def test_tv_command(tmp_path):
    out = tmp_path / "tv.csv"
    assert main(["tv", "--row-sums", "1,2,1", "--col-sums", "1,2,1", "--k-max", "5",
                 "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "algorithm,k,tv,log10_tv"
    assert len(lines) == 2 + 3 * 5


def test_sample_and_estimate_are_byte_identical(tmp_path):
    outputs = []
    for run in range(2):
        s = tmp_path / f"s{run}.txt"
        e = tmp_path / f"e{run}.csv"
        assert main(["sample", "--input", "finch", "--algorithm", "rectangle-loop",
                     "--iterations", "300", "--seed", "5", "--thin", "50", "--output", str(s)]) == 0
        assert main(["estimate", "--input", "finch", "--algorithm", "curveball",
                     "--iterations", "300", "--seed", "5", "--output", str(e)]) == 0
        # the metadata line names the output path, so compare data rows only
        data = b"\n".join(e.read_bytes().split(b"\n")[1:])
        outputs.append((s.read_bytes(), data))
    assert outputs[0] == outputs[1]
    samples = parse_matrices(outputs[0][0].decode())
    assert len(samples) == 6
    assert all(a.margins == finch().margins for a in samples)
    assert "seed=5" in (tmp_path / "e0.csv").read_text().splitlines()[0]
    assert outputs[0][1].decode().splitlines()[0] == "iteration,value,running_mean,running_std"


def test_sample_report(capsys, tmp_path):
    path = tmp_path / "a.txt"
    path.write_text("0 1 0\n1 0 1\n0 1 0\n")
    assert main(["sample", "--input", str(path), "--algorithm", "rectangle-loop",
                 "--iterations", "10", "--seed", "1", "--report"]) == 0
    report = capsys.readouterr().out.strip().splitlines()[-1]
    assert report.startswith("iterations=10 swaps=")
    assert "time_per_swap=" in report


def test_benchmark_command(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["benchmark", "--rows", "30", "--cols", "30", "--fill", "0.1,0.5",
                 "--iterations", "500", "--seed", "3", "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "method,fill,rows,cols,iterations,swaps,time_per_swap"
    assert len(lines) == 2 + 4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "margin_mcmc", "enumerate",
                           "--row-sums", "1,1", "--col-sums", "1,1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "2"
