"""Command-line interface: headers, exit codes, determinism."""

import pytest

from crvirtres.cli import main

SOLVE_HEADER = (
    "m,n,c_min,r,lambda_p,mu_p,lambda_s,mu_s,rho_p,"
    "p_block,p_ft,c_avg_unconditioned,c_avg_conditional"
)
SIMULATE_HEADER = (
    "policy,r,horizon,replications,seed,su_arrivals,su_admitted,su_blocked,"
    "ft_events,su_force_terminated,p_block,p_block_half_width,p_ft,"
    "p_ft_half_width,c_avg_unconditioned,c_avg_unconditioned_half_width,"
    "c_avg_conditional,c_avg_conditional_half_width"
)
VALIDATE_HEADER = "kpi,analytical,simulated,ci_half_width,abs_gap,rel_gap,covered"
OPTIMIZE_HEADER = "lambda_p,rho_s,alpha,r_star,zeta_star"
SWEEP_COLUMNS = ",rho_p,r,p_block,p_ft,c_avg_unconditioned,c_avg_conditional"
DRIFT_HEADER = "n_p,n_s,drift_fsu,drift_baseline,drift_fsu_strict4"


@pytest.fixture
def mini_scenario(tmp_path):
    path = tmp_path / "mini.scn"
    path.write_text(
        "lambda_p_grid = 0.5, 3.0\n"
        "r_grid = 0, 2\n"
        "horizon = 2000\n"
        "replications = 2\n"
    )
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_header_and_values(self, capsys):
        code, out, _ = run(capsys, ["solve"])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == SOLVE_HEADER
        assert len(lines) == 2
        row = lines[1].split(",")
        assert row[:4] == ["4", "5", "2", "0"]
        assert float(row[8]) == pytest.approx(0.26)  # rho_p = lambda_p / mu_p
        assert float(row[9]) == pytest.approx(1.530553178104356e-04, rel=1e-9)

    def test_scenario_reservation_flows_through(self, capsys, tmp_path):
        path = tmp_path / "r4.scn"
        path.write_text("r = 4\n")
        code, out, _ = run(capsys, ["solve", "--scenario", str(path)])
        assert code == 0
        assert out.splitlines()[1].split(",")[3] == "4"


class TestSimulate:
    def test_header_and_overrides(self, capsys, mini_scenario):
        code, out, _ = run(
            capsys,
            ["simulate", "--scenario", mini_scenario,
             "--horizon", "1000", "--reps", "3", "--seed", "7"],
        )
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == SIMULATE_HEADER
        row = lines[1].split(",")
        assert row[0] == "fsu_virtual_reservation"
        assert (row[2], row[3], row[4]) == ("1000.0", "3", "7")

    def test_byte_identical_reruns(self, capsys, mini_scenario):
        _, first, _ = run(capsys, ["simulate", "--scenario", mini_scenario])
        _, second, _ = run(capsys, ["simulate", "--scenario", mini_scenario])
        assert first == second

    def test_policy_flag(self, capsys, tmp_path):
        path = tmp_path / "r2.scn"
        path.write_text("r = 2\nhorizon = 1000\nreplications = 2\n")
        _, out, _ = run(capsys, ["simulate", "--scenario", str(path),
                                 "--policy", "min-alloc"])
        assert out.splitlines()[1].split(",")[:2] == ["min_alloc_cooperative", "2"]
        # the isolated policy ignores any reservation
        _, out, _ = run(capsys, ["simulate", "--scenario", str(path),
                                 "--policy", "nc"])
        assert out.splitlines()[1].split(",")[:2] == ["non_cooperative", "0"]


class TestValidate:
    def test_passing_run(self, capsys):
        code, out, _ = run(
            capsys, ["validate", "--horizon", "50000", "--reps", "4", "--seed", "3"]
        )
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == VALIDATE_HEADER
        assert [row.split(",")[0] for row in lines[1:]] == [
            "p_block", "p_ft", "c_avg",
        ]
        assert all(row.endswith("true") for row in lines[1:])

    def test_undersampled_run_fails(self, capsys, tmp_path):
        # a horizon too short to observe the rare losses leaves degenerate
        # zero-width intervals around zero, which cannot cover the truth
        path = tmp_path / "tiny.scn"
        path.write_text("horizon = 500\nreplications = 2\nseed = 1\n")
        code, out, _ = run(capsys, ["validate", "--scenario", str(path)])
        assert code == 1
        assert any(row.endswith("false") for row in out.splitlines()[1:])


class TestOptimize:
    def test_grid_output(self, capsys, mini_scenario):
        code, out, _ = run(capsys, ["optimize", "--scenario", mini_scenario])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == OPTIMIZE_HEADER
        # two arrival rates crossed with the three default secondary loads
        assert len(lines) == 1 + 2 * 3
        first = lines[1].split(",")
        assert float(first[2]) == 1.0
        assert int(first[3]) >= 0

    def test_alpha_override(self, capsys, mini_scenario):
        _, out, _ = run(
            capsys, ["optimize", "--scenario", mini_scenario, "--alpha", "50"]
        )
        stars = [int(row.split(",")[3]) for row in out.splitlines()[1:]]
        # heavier weight on dropped sessions buys reservation slots
        assert max(stars) > 0


class TestSweeps:
    def test_arrival_axis(self, capsys, mini_scenario):
        code, out, _ = run(capsys, ["sweep-pft", "--scenario", mini_scenario])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "lambda_p" + SWEEP_COLUMNS
        assert len(lines) == 1 + 2 * 2  # arrival grid x reservation grid
        # axis outer, reservation inner
        seen = [tuple(row.split(",")[:3]) for row in lines[1:]]
        assert [s[0] for s in seen] == ["0.5", "0.5", "3.0", "3.0"]
        assert [s[2] for s in seen] == ["0", "2", "0", "2"]
        # rho_p tracks the axis
        assert float(seen[2][1]) == pytest.approx(3.0 / 5.0)

    def test_shared_axis_commands_agree(self, capsys, mini_scenario):
        outputs = []
        for cmd in ("sweep-pft", "sweep-pb", "sweep-throughput"):
            _, out, _ = run(capsys, [cmd, "--scenario", mini_scenario])
            outputs.append(out)
        assert outputs[0] == outputs[1] == outputs[2]

    def test_reservation_tradeoff_in_rows(self, capsys, mini_scenario):
        _, out, _ = run(capsys, ["sweep-pft", "--scenario", mini_scenario])
        rows = [row.split(",") for row in out.splitlines()[1:]]
        by_axis = {}
        for row in rows:
            by_axis.setdefault(row[0], []).append(row)
        for group in by_axis.values():
            drops = [float(row[4]) for row in group]
            blocks = [float(row[3]) for row in group]
            assert drops == sorted(drops, reverse=True)
            assert blocks == sorted(blocks)

    def test_service_axis(self, capsys, mini_scenario):
        code, out, _ = run(capsys, ["sweep-mu1", "--scenario", mini_scenario])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "mu1" + SWEEP_COLUMNS
        assert len(lines) == 1 + 4 * 2  # default mu1 grid x reservation grid

    def test_floor_axis(self, capsys, mini_scenario):
        code, out, _ = run(capsys, ["sweep-cmin", "--scenario", mini_scenario])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "c_min" + SWEEP_COLUMNS
        assert len(lines) == 1 + 3 * 2  # default floor grid x reservation grid


class TestDrift:
    def test_per_state_table(self, capsys):
        code, out, _ = run(capsys, ["drift"])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == DRIFT_HEADER
        assert len(lines) == 1 + 29
        assert lines[1] == "0,0,1.0,1.0,1.0"


class TestErrors:
    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_missing_command(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_missing_scenario_file(self, capsys):
        code, _, err = run(capsys, ["solve", "--scenario", "/no/such/file.scn"])
        assert code == 2
        assert "error:" in err

    def test_malformed_scenario(self, capsys, tmp_path):
        path = tmp_path / "bad.scn"
        path.write_text("bogus = 1\n")
        code, _, err = run(capsys, ["solve", "--scenario", str(path)])
        assert code == 2
        assert "unknown key" in err

    def test_empty_sweep_grid(self, capsys, tmp_path):
        path = tmp_path / "empty.scn"
        path.write_text("r_grid =\n")
        code, _, err = run(capsys, ["sweep-pft", "--scenario", str(path)])
        assert code == 2
        assert "nothing to sweep" in err
