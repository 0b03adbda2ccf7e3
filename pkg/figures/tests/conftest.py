import pytest


def write_csv(path, header, rows):
    lines = [header] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def sweep_csv(tmp_path):
    rows = []
    for i in range(0, 11):
        for t in range(0, 11 - i):
            f_i, f_t = i / 10, t / 10
            f_u = 1 - f_i - f_t
            rows.append((f_i, f_t, round(f_u, 10), "ui", "lattice", 0.33,
                         f_i * f_t * 100, 1.0, 300, 300, 424))
    return write_csv(
        tmp_path / "sweep.csv",
        "f_I,f_T,f_U,rule,topology,r_UT,mean_W,std_W,mean_kI,mean_kT,mean_kU",
        rows,
    )


@pytest.fixture
def snapshot_csv_all_u(tmp_path):
    rows = [(40, node, 3) for node in range(64)]
    return write_csv(tmp_path / "snapshots_0.csv", "step,node,strategy_code", rows)


@pytest.fixture
def snapshot_csv_mixed(tmp_path):
    rows = [(0, node, 1 + node % 3) for node in range(64)]
    rows += [(10, node, 1 + (node // 8) % 3) for node in range(64)]
    return write_csv(tmp_path / "snapshots_1.csv", "step,node,strategy_code", rows)


@pytest.fixture
def masscurve_csv(tmp_path):
    rows = []
    for strategy, a in (("I", 1.75), ("T", 1.9)):
        for length in (1, 2, 4, 8, 16, 32):
            rows.append(("ui", strategy, length, round(length**a, 4)))
    return write_csv(tmp_path / "masscurve.csv", "rule,strategy,L,M", rows)


@pytest.fixture
def fractal_csv(tmp_path):
    rows = [(0.33, "ui", "I", 1.75), (0.33, "ui", "T", 1.9)]
    return write_csv(tmp_path / "fractal.csv", "r_UT,rule,strategy,a", rows)


@pytest.fixture
def gl_csv(tmp_path):
    rows = [(l, rule, 1.3 + 0.4 * ((-1) ** l) / l)
            for rule in ("ui", "prop") for l in range(1, 17)]
    return write_csv(tmp_path / "gl.csv", "l,rule,G", rows)


@pytest.fixture
def spectrum_csv(tmp_path):
    rows = [(k / 100, (k / 100) ** -1.5 if k else 0.0, "prop") for k in range(0, 51)]
    return write_csv(tmp_path / "spectrum.csv", "freq,power,rule", rows)


@pytest.fixture
def lagcorr_csv(tmp_path):
    rows = [(d, lag, 0.5 / d * (0.9**lag), "prop")
            for d in (2, 4, 6, 10) for lag in range(0, 21)]
    return write_csv(tmp_path / "lagcorr.csv", "distance,lag,rho,rule", rows)
