import random
from itertools import product

import pytest

from metaplectic import dualdata
from metaplectic.characters import CoverContext
from metaplectic.errors import NotCentral
from metaplectic.forms import EtaMap, fair_bisector, invariant_form
from metaplectic.localfield import TameField
from metaplectic.rootdata import RootDatum
from metaplectic.torus import (TorusCover, h_modified, is_central, phi_h,
                               weyl_conjugate_central)


def c2_setup(n=2, q=7, g=3):
    rd = RootDatum.build("C", 2)
    qf = invariant_form(rd, 1)
    md = dualdata.compute(rd, qf, n)
    field = TameField(q, q, n, g)
    eta = EtaMap.trivial(field, rd)
    cover = TorusCover(field, fair_bisector(qf))
    return rd, qf, md, field, eta, cover


def test_torus_laws_exhaustive_box():
    rd, qf, md, field, eta, cover = c2_setup()
    d = cover.bisector
    els = [field.element(v, e) for v in range(0, 2) for e in range(6)]
    ys = [(1, 0), (0, 1), (1, 1), (2, -1)]
    for y1, y2 in product(ys, repeat=2):
        for a, b in product(els, repeat=2):
            t1, t2 = cover.pure_tensor(y1, a), cover.pure_tensor(y2, b)
            assert t1.commutator(t2) == field.hilbert(a, b) ** qf.bq(y1, y2)
            lhs = cover.pure_tensor(y1, a) * cover.pure_tensor(y2, a)
            rhs = cover.pure_tensor(tuple(p + q_ for p, q_ in zip(y1, y2)), a,
                                    field.hilbert(a, a) ** d.value(y1, y2))
            assert lhs == rhs
            lhs = cover.pure_tensor(y1, a) * cover.pure_tensor(y1, b)
            rhs = cover.pure_tensor(y1, a * b, field.hilbert(a, b) ** qf.q(y1))
            assert lhs == rhs


def test_group_axioms():
    rng = random.Random(17)
    _, _, _, field, _, cover = c2_setup()
    els = [field.element(v, e) for v in range(-2, 3) for e in range(6)]
    for _ in range(250):
        ts = [cover.element(field.root_of_unity(rng.randrange(field.M)),
                            (rng.choice(els), rng.choice(els))) for _ in range(3)]
        assert (ts[0] * ts[1]) * ts[2] == ts[0] * (ts[1] * ts[2])
        assert (ts[0] * ts[0].inv()).is_identity()
        assert ts[0] * cover.identity() == ts[0]
        assert (ts[0] ** 3) == ts[0] * ts[0] * ts[0]


def test_h_multiplicativity_and_b_shift():
    rng = random.Random(19)
    rd, qf, md, field, eta, cover = c2_setup()
    alpha = rd.simple_root(0)
    els = [field.element(v, e) for v in range(-2, 3) for e in range(6)]
    for _ in range(250):
        a, b, c = (rng.choice(els) for _ in range(3))
        lhs = phi_h(cover, eta, alpha, 1, a, b) * phi_h(cover, eta, alpha, 1, c, b)
        rhs = phi_h(cover, eta, alpha, 1, a * c, b) * cover.scalar(field.hilbert(a, c))
        assert lhs == rhs
        d = rng.choice(els)
        assert phi_h(cover, eta, alpha, 1, a, d * b) == \
            phi_h(cover, eta, alpha, 1, a, b) * cover.scalar(field.hilbert(d, a))


def test_b_independence_at_modified_power():
    rd, qf, md, field, eta, cover = c2_setup()
    for i in range(2):
        alpha = rd.simple_root(i)
        na = md.n_alpha(alpha)
        a = field.uniformizer() ** na
        values = {phi_h(cover, eta, alpha, qf.q(alpha.coroot), a, b)
                  for b in [field.element(v, e) for v in range(-2, 3) for e in range(6)]}
        assert len(values) == 1


def test_h_modified_shape():
    # Phi(h_alpha(pi^{n_alpha})) = (eta-symbol, alpha_[n] (x) pi) as a pair
    rd, qf, md, field, eta_triv, cover = c2_setup()
    eta = EtaMap(field, rd, (field.unit(1), field.unit(2)))
    alpha = rd.simple_root(0)
    t = h_modified(cover, eta, md, alpha, field.uniformizer())
    assert tuple((c.val, c.unit_exp) for c in t.coords) == ((2, 0), (0, 0))
    assert t.zeta == field.hilbert(eta.of_coroot(alpha) ** 2, field.uniformizer())


def test_splitting_braid_identity():
    # h_gamma(pi^{n_gamma}) = h_beta(pi^{n_beta}) h_alpha(pi^{n_alpha})^{-c}
    # for gamma = s_alpha(beta) and c = n_beta <alpha, beta^vee> / n_alpha
    for letter, rank, n, q, g in [("C", 2, 2, 7, 3), ("G", 2, 2, 7, 3),
                                  ("G", 2, 6, 7, 3), ("A", 3, 4, 13, 2),
                                  ("B", 3, 2, 7, 3)]:
        rd = RootDatum.build(letter, rank)
        qf = invariant_form(rd, 1)
        md = dualdata.compute(rd, qf, n)
        field = TameField(q, q, n, g)
        eta = EtaMap.trivial(field, rd)
        cover = TorusCover(field, fair_bisector(qf))
        pi = field.uniformizer()
        for i in range(rank):
            alpha = rd.simple_root(i)
            na = md.n_alpha(alpha)
            for j in range(rank):
                beta = rd.simple_root(j)
                gamma_coeffs = rd.reflect_coeffs(i, beta.coeffs)
                if not any(gamma_coeffs):
                    continue
                gamma = rd.root_by_coeffs(gamma_coeffs)
                c = md.n_alpha(beta) * rd.pairing(alpha.x, beta.coroot)
                assert c % na == 0
                lhs = h_modified(cover, eta, md, gamma, pi)
                rhs = h_modified(cover, eta, md, beta, pi) * \
                    (h_modified(cover, eta, md, alpha, pi) ** (-(c // na)))
                assert lhs == rhs


def test_centrality():
    rd, qf, md, field, eta, cover = c2_setup()
    for row in md.y_qn.basis:
        assert is_central(cover.pure_tensor(row, field.uniformizer()), md)
    # SL2 with n=4: alpha^vee (x) pi is not central, 2 alpha^vee (x) pi is
    a1 = RootDatum.build("A", 1)
    q1 = invariant_form(a1, 1)
    f13 = TameField(13, 13, 4, 2)
    cov = TorusCover(f13, fair_bisector(q1))
    md4 = dualdata.compute(a1, q1, 4)
    assert not is_central(cov.pure_tensor((1,), f13.uniformizer()), md4)
    assert is_central(cov.pure_tensor((2,), f13.uniformizer()), md4)
    # unit points with exponents divisible by n are always central
    assert is_central(cov.pure_tensor((1,), f13.unit(4)), md4)


def test_centrality_matches_commutator_scan():
    rd, qf, md, field, eta, cover = c2_setup()
    box = [field.element(v, e) for v in range(0, 2) for e in range(6)]
    probes = [cover.element(field.one_value(), (a, b))
              for a in (field.uniformizer(), field.unit(1))
              for b in (field.uniformizer(), field.unit(1), field.one())]
    for a in box:
        for b in box:
            t = cover.element(field.one_value(), (a, b))
            commutes = all(t.commutator(p).is_one() for p in probes)
            if commutes:
                commutes = all(t.commutator(cover.element(field.one_value(), (x, y))).is_one()
                               for x in box for y in box)
            assert commutes == is_central(t, md)


def test_weyl_conjugation():
    rd, qf, md, field, eta, cover = c2_setup()
    for row in md.y_qn.basis:
        for a in (field.uniformizer(), field.unit(1), field.element(1, 3)):
            t = cover.pure_tensor(row, a)
            for i in range(2):
                conj = weyl_conjugate_central(t, i, md, eta)
                assert is_central(conj, md)
                alpha = rd.simple_root(i)
                alpha_t = field.one()
                for k, coord in zip(alpha.x, t.coords):
                    alpha_t = alpha_t * coord ** k
                if alpha_t.is_one():
                    assert conj == t
    # h-element conjugates by Phi(h_alpha(x^-2)): alpha(h_alpha(x)) = x^2
    alpha = rd.simple_root(0)
    na = md.n_alpha(alpha)
    t = h_modified(cover, eta, md, alpha, field.uniformizer())
    conj = weyl_conjugate_central(t, 0, md, eta)
    expect = t * phi_h(cover, eta, alpha, qf.q(alpha.coroot),
                       field.uniformizer() ** (-2 * na))
    assert conj == expect
    with pytest.raises(NotCentral):
        f13 = TameField(13, 13, 4, 2)
        a1 = RootDatum.build("A", 1)
        q1 = invariant_form(a1, 1)
        md4 = dualdata.compute(a1, q1, 4)
        cov = TorusCover(f13, fair_bisector(q1))
        weyl_conjugate_central(cov.pure_tensor((1,), f13.uniformizer()), 0, md4,
                               EtaMap.trivial(f13, a1))


def test_center_cover_matches_full_cover():
    rd, qf, md, field, eta, cover = c2_setup()
    ctx = CoverContext.create(md, fair_bisector(qf), eta)
    rng = random.Random(23)
    els = [field.element(v, e) for v in range(0, 3) for e in range(6)]
    for _ in range(200):
        t1 = ctx.center_cover.element(field.one_value(),
                                      (rng.choice(els), rng.choice(els)))
        t2 = ctx.center_cover.element(field.one_value(),
                                      (rng.choice(els), rng.choice(els)))
        # inclusion into the full cover is a homomorphism
        lhs = ctx.center_to_full(t1 * t2)
        rhs = ctx.center_to_full(t1) * ctx.center_to_full(t2)
        assert lhs == rhs
        assert is_central(lhs, md)


def test_conjugation_routes_agree():
    # the full-cover formula and the line-by-line central-cover route give
    # the same element through the inclusion homomorphism
    rd, qf, md, field, eta, cover = c2_setup()
    from metaplectic.forms import fair_bisector
    ctx = CoverContext.create(md, fair_bisector(qf), eta)
    els = [field.element(v, e) for v in (0, 1, 2) for e in range(6)]
    import random
    rng = random.Random(47)
    for _ in range(120):
        t_center = ctx.center_cover.element(
            field.root_of_unity(rng.randrange(field.M)),
            (rng.choice(els), rng.choice(els)))
        t_full = ctx.center_to_full(t_center)
        for i in range(2):
            via_center = ctx.center_to_full(ctx.central_conjugate(t_center, i))
            via_full = weyl_conjugate_central(t_full, i, md, eta)
            assert via_center == via_full, (t_center, i)
