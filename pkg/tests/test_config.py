import numpy as np
import pytest

from mswave.config import parse_config, parse_document
from mswave.errors import ConfigError
from mswave.initial import InitialCondition
from mswave.spectral import make_grid

from conftest import CONFIGS

MINIMAL = """
epsilon = 0.1
mu = 1.0
t_end = 5.0
ic.kind = sine
ic.amplitude = 0.1
ic.mode = 1
"""


def test_minimal_document_gets_defaults():
    cfg = parse_config(MINIMAL)
    c = cfg.controls
    assert cfg.n == 256
    assert (c.rel_tol, c.dt_min, c.s_max, c.tail_max) == (1e-10, 1e-12, 1e6, 1e-3)
    assert c.sample_interval == pytest.approx(5e-3)
    assert cfg.norms_source == "numeric" and cfg.seed == 0 and cfg.dealias == "two_thirds"
    assert cfg.params.epsilon == 0.1 and cfg.ic.kind == "sine"


def test_negative_epsilon_names_field():
    with pytest.raises(ConfigError, match="epsilon"):
        parse_config(MINIMAL.replace("epsilon = 0.1", "epsilon = -1"))


def test_duplicate_key_reports_line():
    text = "epsilon = 0.1\nmu = 1\nepsilon = 0.2\n"
    with pytest.raises(ConfigError, match="line 3.*epsilon.*line 1"):
        parse_document(text)


def test_unknown_keys_are_listed():
    with pytest.raises(ConfigError, match="bogus, ic.colour"):
        parse_config(MINIMAL + "bogus = 1\nic.colour = red\n")


def test_missing_required_keys():
    with pytest.raises(ConfigError, match="t_end"):
        parse_config("epsilon = 0.1\nmu = 1\nic.kind = sine\n")


@pytest.mark.parametrize("line,field", [
    ("n = 7", "n"), ("n = 100.5", "n"), ("t_end = 0", "t_end"), ("rel_tol = 0", "rel_tol"),
    ("norms_source = guess", "norms_source"), ("dealias = cubic", "dealias"),
    ("ic.kind = square", "ic.kind"), ("seed = -2", "seed"), ("mu = \"one\"", "mu"),
])
def test_constraint_violations_name_field(line, field):
    key = line.split("=")[0].strip()
    lines = [l for l in MINIMAL.strip().splitlines() if not l.startswith(key + " ")]
    with pytest.raises(ConfigError, match=field):
        parse_config("\n".join(lines + [line]))


def test_malformed_line():
    with pytest.raises(ConfigError, match="line 2"):
        parse_document("epsilon = 0.1\nthis line has no equals\n")


def test_comments_and_quoted_strings():
    d = parse_document('# header\nmu = 2  # trailing\nout = "a b.csv"\nkind = bump\n')
    assert d == {"mu": 2, "out": "a b.csv", "kind": "bump"}


def test_overrides_win():
    cfg = parse_config(MINIMAL, ["epsilon=0.3", "n=128", "ic.coefficients=[[2, 0.1, 0.0]]"])
    assert cfg.params.epsilon == 0.3 and cfg.n == 128
    assert cfg.ic.coefficients == ((2, 0.1, 0.0),)


def test_override_needs_equals():
    with pytest.raises(ConfigError):
        parse_config(MINIMAL, ["epsilon"])


def test_shipped_configs_parse():
    for path in CONFIGS.glob("*.cfg"):
        parse_config(path.read_text())


def test_config_echo_round_trips():
    cfg = parse_config(MINIMAL)
    d = cfg.as_dict()
    assert d["epsilon"] == 0.1 and d["ic"]["kind"] == "sine" and d["n"] == 256


def test_bump_has_zero_mean_and_peaks_at_half():
    g = make_grid(512)
    u = InitialCondition(kind="bump", amplitude=2.0, width=0.05).field(g)
    assert abs(np.mean(u)) <= 1e-12
    assert g.nodes[np.argmax(u)] == 0.5


def test_multisine_field():
    g = make_grid(64)
    ic = InitialCondition(kind="multisine", coefficients=((1, 0.2, 0.0), (3, 0.0, -0.1)))
    x = g.nodes
    np.testing.assert_allclose(ic.field(g), 0.2 * np.cos(2 * np.pi * x) - 0.1 * np.sin(6 * np.pi * x))


def test_fourier_random_is_seeded():
    g = make_grid(64)
    a = InitialCondition(kind="fourier", amplitude=0.1, modes=3, seed=7).field(g)
    b = InitialCondition(kind="fourier", amplitude=0.1, modes=3, seed=7).field(g)
    c = InitialCondition(kind="fourier", amplitude=0.1, modes=3, seed=8).field(g)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert np.max(np.abs(a)) <= 0.6


@pytest.mark.parametrize("kw", [
    dict(kind="sine", mode=0), dict(kind="bump", width=0.0), dict(kind="multisine"),
    dict(kind="multisine", coefficients=((0, 1.0, 0.0),)), dict(kind="sine", amplitude=np.nan),
])
def test_initial_condition_validation(kw):
    with pytest.raises(ConfigError):
        InitialCondition(**kw)


def test_unresolvable_mode():
    with pytest.raises(ConfigError, match="resolvable"):
        InitialCondition(kind="multisine", coefficients=((40, 1.0, 0.0),)).field(make_grid(64))
