import random

import pytest

import allmod


def random_modulus(rng, n):
    return (1 << (n - 1)) | rng.getrandbits(n - 1)


@pytest.mark.parametrize("method", allmod.REDUCERS)
@pytest.mark.parametrize("n", [8, 64, 256])
def test_engines_agree_with_python_modulo(method, n):
    rng = random.Random(n)
    for _ in range(50):
        m = random_modulus(rng, n)
        a = rng.getrandbits(2 * n)
        assert allmod.reduce(method, a, m, n).residue == a % m


def test_hybrid_trace_matches_latency_model():
    n, k = 128, allmod.derive_k(128)
    m_split = allmod.balanced_m(n, k)
    assert (k, m_split) == (8, 15)
    r = allmod.reduce_hybrid(2**255 + 12345, random_modulus(random.Random(1), n), n)
    assert r.total_cycles == allmod.latency_hybrid_end_to_end(n, k, m_split, 0) == 20
    assert r.events[-1][0] == r.total_cycles
    assert {unit for _, unit, _ in r.events} >= {"lookup", "serial_add", "subtract", "fuse", "adjust"}


def test_invalid_inputs_raise():
    with pytest.raises(allmod.InvalidModulusError):
        allmod.reduce_lut(1, 0x7F, 8)
    with pytest.raises(allmod.BoundsError):
        allmod.reduce_iterative(1 << 16, 0x81, 8)
    with pytest.raises(allmod.AllmodError):
        allmod.Throughput.parse("0.75")
    with pytest.raises(ValueError):
        allmod.reduce("barrett", 1, 0x81, 8)


def test_model_and_search():
    assert allmod.resources_hybrid(128, 8, 15, 0).as_tuple() == (15, 8, 8)
    assert allmod.latency_lut_based(128, 8) == 9
    costs = allmod.default_cost_table()
    schemes = allmod.search(128, latency_req=16)
    assert schemes and all(s.latency <= 16 for s in schemes)
    front = allmod.pareto(schemes)
    lat = [s.latency for s in front]
    area = [s.area for s in front]
    assert lat == sorted(lat) and area == sorted(area, reverse=True)
    balanced = next(s for s in schemes if (s.m, s.width_tree) == (15, 0))
    assert round(balanced.efficiency, 2) == 25040.06
    assert costs.at(128).bram == 512


def test_cost_table_text_round_trip():
    table = allmod.calibrate()
    again = allmod.CostTable.parse(table.dumps())
    assert again.at(8192).adder == table.at(8192).adder
    with pytest.raises(allmod.CalibrationRequiredError):
        table.at(100)
