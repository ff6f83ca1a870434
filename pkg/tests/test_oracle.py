import pytest

from hivekit import (BudgetExceededError, EnumerationBudget, Submodule,
                     ValuedMatrix, brute_max_direct_sum, brute_min_direct_sum,
                     enumerate_lr_fillings, enumerate_submodules,
                     lattice_invariants, max_direct_sum_norm,
                     min_direct_sum_norm, pair_invariant, saturate,
                     span_fingerprint, stabilized_value)
from hivekit.cli import InstanceSpec, random_pair

from conftest import lat, mat, seeded


def budget(m=None, cap=500_000, max_n=3):
    return EnumerationBudget(max_n=max_n, exponent_bound=m, count_cap=cap)


def spans(subs):
    return {span_fingerprint(s.gens) for s in subs}


def test_enumerate_o1(p2):
    o1 = lat(p2, [[1]])
    subs = enumerate_submodules(o1, 1, budget(m=1, max_n=1))
    assert spans(subs) == {span_fingerprint(mat(p2, [[1]])),
                          span_fingerprint(mat(p2, [[2]]))}


def test_enumerate_o2_full_rank(p2):
    o2 = lat(p2, [[1, 0], [0, 1]])
    subs = enumerate_submodules(o2, 2, budget(m=0, max_n=2))
    assert len(subs) == 1
    assert subs[0].same_span(Submodule(ValuedMatrix.identity(p2, 2)))


def test_enumerate_o2_rank1(p2):
    o2 = lat(p2, [[1, 0], [0, 1]])
    subs = enumerate_submodules(o2, 1, budget(m=1, max_n=2))
    got = spans(subs)
    for want in ([[1], [0]], [[0], [1]], [[1], [1]],
                 [[2], [0]], [[0], [2]], [[2], [2]]):
        assert span_fingerprint(mat(p2, want)) in got
    assert len(got) == len(subs)  # no duplicate spans


def test_enumerate_requires_padic(tadic):
    o1 = lat(tadic, [[tadic.one]])
    with pytest.raises(ValueError, match="p-adic"):
        enumerate_submodules(o1, 1, budget(m=1, max_n=1))


def test_budget_refuses_blowup(p2):
    o3 = lat(p2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(BudgetExceededError, match="exceed"):
        enumerate_submodules(o3, 2, budget(m=4, cap=100))


def test_span_fingerprint_identifies_spans(p2):
    a = mat(p2, [[2], [1]])
    b = mat(p2, [[6], [3]])  # same span: (6,3) = 3*(2,1), 3 a unit
    c = mat(p2, [[4], [2]])  # strictly smaller span
    assert span_fingerprint(a) == span_fingerprint(b)
    assert span_fingerprint(a) != span_fingerprint(c)
    d = mat(p2, [[1, 0], [0, 1]])
    e = mat(p2, [[1, 1], [1, 2]])  # unimodular: same span as O^2
    assert span_fingerprint(d) == span_fingerprint(e)


def test_brute_min_examples(p2):
    ident = lat(p2, [[1, 0], [0, 1]])
    assert brute_min_direct_sum(ident, ident, 1, 1, budget(m=1)).value == 0
    a = lat(p2, [[4, 0], [0, 1]])
    c = lat(p2, [[2, 0], [0, 1]])
    res = brute_min_direct_sum(a, c, 1, 1, budget(m=2))
    assert res.value == 1
    assert res.minimizers  # all minimizing pairs are reported
    for sub_a, sub_c in res.minimizers[:5]:
        concat = sub_a.gens.hstack(sub_c.gens)
        from hivekit import matrix_norm
        assert matrix_norm(concat) == 1
    assert brute_min_direct_sum(a, c, 0, 1, budget(m=1)).value == 0


def test_brute_max_examples(p2):
    ident = lat(p2, [[1, 0], [0, 1]])
    assert brute_max_direct_sum(ident, ident, 1, 1, budget(m=1)).value == 0
    a = lat(p2, [[4, 0], [0, 1]])
    c = lat(p2, [[2, 0], [0, 1]])
    assert brute_max_direct_sum(a, c, 1, 1, budget(m=2)).value == 2
    assert brute_max_direct_sum(a, c, 2, 0, budget(m=1)).value == 2  # = |lam|


def test_oracle_vs_optimizer(p2):
    rng = seeded(47)
    for _ in range(4):
        spec = InstanceSpec(n=3, ring=p2, exponent_range=(0, 2),
                            seed=rng.randrange(10**6), unimodular_mix_steps=4)
        n_lat, lam_lat = random_pair(spec)
        m_lat, _ = pair_invariant(n_lat, lam_lat)
        for t in range(4):
            for s in range(t + 1):
                a, c = 3 - t, t - s
                if a + c:
                    assert (stabilized_value("min", lam_lat, n_lat, a, c).value
                            == min_direct_sum_norm(lam_lat, n_lat, a, c))
                if c:
                    assert (stabilized_value("max", lam_lat, m_lat, s, c).value
                            == max_direct_sum_norm(lam_lat, m_lat, s, c))


def test_duality_certified_by_brute(p2):
    rng = seeded(53)
    for _ in range(3):
        spec = InstanceSpec(n=3, ring=p2, exponent_range=(0, 2),
                            seed=rng.randrange(10**6), unimodular_mix_steps=3)
        n_lat, lam_lat = random_pair(spec)
        m_lat, _ = pair_invariant(n_lat, lam_lat)
        size = sum(lattice_invariants(lam_lat))
        for t in range(4):
            for s in range(t + 1):
                if t == s and t == 0:
                    continue
                a, c = 3 - t, t - s
                bmin = stabilized_value("min", lam_lat, n_lat, a, c).value \
                    if a + c else 0
                bmax = stabilized_value("max", lam_lat, m_lat, s, c).value \
                    if c else sum(sorted(lattice_invariants(lam_lat),
                                         reverse=True)[:s])
                assert bmin + bmax == size


def test_saturation_lowers_norm(p2):
    d = lat(p2, [[4, 0], [0, 2]])
    for sub in enumerate_submodules(d, 1, budget(m=2, max_n=2)):
        sat = saturate(d, sub)
        assert all(a <= b for a, b in zip(sat.invariants, sub.invariants))


def test_boundary_warning_is_reported(p2):
    a = lat(p2, [[4, 0], [0, 1]])
    c = lat(p2, [[2, 0], [0, 1]])
    res = brute_min_direct_sum(a, c, 1, 1, budget(m=1))
    assert isinstance(res.boundary_warning, bool)
    stab = stabilized_value("min", a, c, 1, 1)
    assert stab.value == 1 and not stab.boundary_warning


# ---------------------------------------------------------------------------
# LR enumeration


def test_lr_pieri_example():
    fills = enumerate_lr_fillings((2, 0), (1, 0), (1, 0))
    assert len(fills) == 1
    assert fills[0].counts == ((1,), (0, 0))


def test_lr_empty_content():
    assert len(enumerate_lr_fillings((2, 1), (2, 1), (0, 0))) == 1


def test_lr_small_example():
    assert len(enumerate_lr_fillings((2, 1, 0), (1, 0, 0), (1, 1, 0))) == 1


def test_lr_counts_symmetric():
    cases = [((3, 2, 1), (2, 1, 0), (2, 1, 0)),
             ((4, 2, 1), (2, 1, 0), (3, 1, 0)),
             ((3, 3, 2), (2, 1, 1), (2, 2, 0))]
    for lam, mu, nu in cases:
        assert (len(enumerate_lr_fillings(lam, mu, nu))
                == len(enumerate_lr_fillings(lam, nu, mu)))


def test_lr_known_count():
    # c^{(3,2,1)}_{(2,1),(2,1)} = 2, the classic example
    assert len(enumerate_lr_fillings((3, 2, 1), (2, 1, 0), (2, 1, 0))) == 2


def test_lr_fillings_all_validate():
    from hivekit import validate_lr
    for f in enumerate_lr_fillings((4, 2, 1), (2, 1, 0), (3, 1, 0)):
        assert validate_lr(f).ok


def test_lr_malformed_triples_rejected():
    with pytest.raises(ValueError):
        enumerate_lr_fillings((1, 2), (0, 0), (3, 0))  # not a partition
    with pytest.raises(ValueError):
        enumerate_lr_fillings((2, 0), (3, 0), (1, 0))  # mu not inside lambda
    with pytest.raises(ValueError):
        enumerate_lr_fillings((2, 0), (1, 0), (2, 0))  # size mismatch


def test_realizability_of_pair_types(p2):
    rng = seeded(59)
    for _ in range(6):
        spec = InstanceSpec(n=3, ring=p2, exponent_range=(0, 2),
                            seed=rng.randrange(10**6), unimodular_mix_steps=4)
        n_lat, lam_lat = random_pair(spec)
        _, mu = pair_invariant(n_lat, lam_lat)
        nu = lattice_invariants(n_lat)
        lam = lattice_invariants(lam_lat)
        assert len(enumerate_lr_fillings(lam, mu, nu)) >= 1


def test_amalgam_nested_minimizers(p2):
    # Lemma "amalgam": for t <= t', minimizing pairs exist whose C-side
    # submodules are nested, the smaller spanned by the bottom slice of the
    # larger's adapted basis
    a = lat(p2, [[4, 0], [0, 1]])
    c = lat(p2, [[2, 0], [0, 2]])
    small = brute_min_direct_sum(a, c, 1, 1, budget(m=2, max_n=2))
    large = brute_min_direct_sum(a, c, 0, 2, budget(m=2, max_n=2))
    assert _has_nested_chain(small, large)


def _has_nested_chain(small, large):
    for _, c_big in large.minimizers:
        if c_big is None:
            continue
        big_inv = c_big.invariants
        for _, c_small in small.minimizers:
            if c_small is None:
                continue
            t = c_small.rank
            if (c_big.contains(c_small)
                    and c_small.invariants == big_inv[c_big.rank - t:]):
                return True
    return False
