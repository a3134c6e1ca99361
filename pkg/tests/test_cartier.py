import itertools
import random

import pytest

from cartierlab import (
    CartierModule,
    CartierMorphism,
    CartierSubmodule,
    FieldSpec,
    ModulePresentation,
    PolynomialRing,
    element_locally_nilpotent,
    elementwise_order,
    image_chain,
    is_nilpotent,
    is_zero_in_crys,
    kappa_apply,
    kappa_image,
    nil_isomorphism,
    nilpotent_filtration,
    nilpotent_part,
    stable_closure,
)
from cartierlab.cartier import cartier_direct_sum, cartier_quotient, kappa_image_inclusion, kappa_matrix
from cartierlab.corpus import random_free
from cartierlab.errors import (
    CapExceededError,
    InconsistentKappaError,
    NotEquivariantError,
    NotFiniteError,
    RingMismatchError,
    UndecidedError,
)
from cartierlab.semialg.modules import Submodule
from conftest import to_library
from oracles import (
    MonomialCartier,
    brute_nilpotent_part,
    fp_rank,
    matmul,
    matpow,
    nilpotence_oracle,
    random_monomial_cartier,
)


def omega(ring):
    """Dualizing module: kappa(x^(q-1)...) = 1, every other digit 0."""
    top = tuple(ring.q - 1 for _ in range(ring.nvars))
    return CartierModule(ModulePresentation.free(ring, 1), {(0, top): [ring.one()]})


def square_zero(ring, fixed):
    """R/(x^2) over F_3 with kappa(g) = 0 and kappa(x g) = x (if fixed) or 0."""
    P = ModulePresentation(ring, 1, [["x^2"]])
    return CartierModule(P, {(0, (1,)): ["x"]} if fixed else {})


def point(ring, kappa_identity=True):
    """The residue field at the origin with kappa = identity (or zero)."""
    P = ModulePresentation(ring, 1, [[v] for v in ring.variables])
    zero = (0,) * ring.nvars
    return CartierModule(P, {(0, zero): ["1"]} if kappa_identity else {})


# kappa_apply

def test_kappa_on_dualizing_module(F3x):
    w = omega(F3x)
    assert kappa_apply(w, ["x^5"]) == (F3x.parse("x"),)
    assert kappa_apply(w, ["x^2"]) == (F3x.one(),)
    assert kappa_apply(w, ["x^3 + x"]) == (F3x.zero(),)


def test_dualizing_module_formula_two_variables(F3xy):
    w = omega(F3xy)
    for a, b in itertools.product(range(9), repeat=2):
        got = kappa_apply(w, [F3xy.parse(f"x^{a}*y^{b}")])[0]
        if (a + 1) % 3 or (b + 1) % 3:
            assert got.is_zero()
        else:
            assert got == F3xy.parse(f"x^{(a + 1) // 3 - 1}*y^{(b + 1) // 3 - 1}")


def test_kappa_semilinear_on_frobenius_power(F3x):
    M = CartierModule(ModulePresentation.free(F3x, 1), {(0, (0,)): ["1"]})
    assert kappa_apply(M, ["x^6"]) == (F3x.parse("x^2"),)
    assert kappa_apply(M, ["0"]) == (F3x.zero(),)


def test_kappa_rejects_foreign_element(F3x):
    other = PolynomialRing(FieldSpec(5), ["x"])
    with pytest.raises(RingMismatchError):
        kappa_apply(omega(F3x), [other.parse("x")])


# kappa_image and image chains

def test_kappa_image_examples(F3x):
    w = omega(F3x)
    assert kappa_image(w) == Submodule.whole(w.presentation)
    Z = CartierModule.zero_map(ModulePresentation.free(F3x, 1))
    assert kappa_image(Z).is_zero()
    P = ModulePresentation(F3x, 2, [["x", "0"]])
    M = CartierModule(P, {(0, (0,)): ["1", "0"]})
    assert kappa_image(M) == Submodule(P, [["1", "0"]])


def test_image_chain_examples(F3x, rem_module):
    Z = CartierModule.zero_map(ModulePresentation.free(F3x, 1))
    v = image_chain(Z)
    assert (v.nilpotent, v.order, v.stabilization_exponent) == (True, 1, 1)
    v = image_chain(rem_module)
    assert not v.nilpotent and v.order is None
    assert v.stabilized_image == Submodule.whole(rem_module.presentation)
    v = is_nilpotent(square_zero(F3x, True))
    assert not v.nilpotent and v.stabilized_image == Submodule(v.stabilized_image.ambient, [["x"]])
    v = is_nilpotent(square_zero(F3x, False))
    assert v.nilpotent and v.order == 1


def test_zero_module_has_order_zero(F3x):
    v = image_chain(CartierModule(ModulePresentation(F3x, 1, [["1"]]), {}))
    assert (v.nilpotent, v.order, v.stabilization_exponent) == (True, 0, 0)


def test_chain_cap(F3x):
    # kappa(g_i) = g_{i+1}: order 4, so a cap of 2 is exceeded
    P = ModulePresentation(F3x, 4, [[("x" if j == i else "0") for j in range(4)] for i in range(4)])
    table = {(i, (0,)): [("1" if j == i + 1 else "0") for j in range(4)] for i in range(3)}
    M = CartierModule(P, table)
    assert image_chain(M).order == 4
    with pytest.raises(CapExceededError, match="stabilization cap exceeded"):
        image_chain(M, cap=2)
    with pytest.raises(ValueError):
        image_chain(M, cap=0)
    with pytest.raises(UndecidedError, match="undecided at cap"):
        element_locally_nilpotent(M, ["1", "0", "0", "0"], cap=2)
    assert element_locally_nilpotent(M, ["1", "0", "0", "0"]) == 4
    assert element_locally_nilpotent(M, ["0", "0", "1", "0"]) == 2


# element-level nilpotence

def test_weak_versus_strong_elementwise(rem_module):
    assert elementwise_order(rem_module, ["1"]) == 1
    assert element_locally_nilpotent(rem_module, ["1"]) is None
    assert element_locally_nilpotent(rem_module, ["0"]) == 0


def test_fixed_element_not_nilpotent(F3x):
    M = square_zero(F3x, True)
    assert kappa_apply(M, ["x"]) == (F3x.parse("x"),)
    assert element_locally_nilpotent(M, ["x"]) is None
    assert elementwise_order(M, ["x"], cap=20) is None


# stable closure

def test_stable_closure_examples(F3x):
    w = omega(F3x)
    whole = Submodule.whole(w.presentation)
    assert stable_closure(w, [["x"]]).submodule == whole
    assert stable_closure(w, [["1"]]).submodule == whole
    assert stable_closure(w, []).is_zero()


def test_non_stable_submodule_rejected(F3x):
    w = omega(F3x)
    with pytest.raises(ValueError):
        CartierSubmodule(w, Submodule(w.presentation, [["x^2"]]))


# nilpotent parts

def test_nilpotent_part_point_module():
    R = PolynomialRing(FieldSpec(2), ["x"])
    P = ModulePresentation(R, 2, [["x", "0"], ["0", "x"]])
    M = CartierModule(P, {(1, (0,)): ["1", "0"]})
    assert nilpotent_part(M, 1).submodule == Submodule(P, [["1", "0"]])
    assert nilpotent_part(M, "all").submodule == Submodule.whole(P)
    assert nilpotent_filtration(M) == [0, 1, 2]


def test_nilpotent_part_trivial_cases(F3x):
    Z = CartierModule.zero_map(ModulePresentation(F3x, 1, [["x^2"]]))
    whole = Submodule.whole(Z.presentation)
    assert nilpotent_part(Z, "all").submodule == whole
    assert nilpotent_part(Z, 1).submodule == whole
    assert nilpotent_part(point(F3x), "all").is_zero()
    with pytest.raises(NotFiniteError, match="finite F_p-dimension"):
        nilpotent_part(omega(F3x), 1)
    with pytest.raises(ValueError):
        nilpotent_part(Z, -1)


# morphisms and crystals

def test_nil_isomorphism_examples(F3x, rem_module):
    for M in (omega(F3x), rem_module, square_zero(F3x, True), point(F3x)):
        assert nil_isomorphism(kappa_image_inclusion(M)).is_nil_isomorphism
        assert nil_isomorphism(CartierMorphism.identity(M)).is_nil_isomorphism
    pt = point(F3x)
    zero = CartierModule(ModulePresentation(F3x, 1, [["1"]]), {})
    verdict = nil_isomorphism(CartierMorphism(zero, pt, [["0"]]))
    assert not verdict.is_nil_isomorphism
    assert verdict.kernel.nilpotent and not verdict.cokernel.nilpotent


def test_zero_in_crys_examples(F3x):
    pt = point(F3x)
    assert not is_zero_in_crys(CartierMorphism.identity(pt)).zero
    nil = square_zero(F3x, False)
    assert is_zero_in_crys(CartierMorphism.identity(nil)).zero
    assert is_zero_in_crys(CartierMorphism(nil, pt, [["0"]])).zero
    w = omega(F3x)
    Q = cartier_quotient(w, kappa_image(w))
    assert Q.presentation.is_zero_module()
    proj = CartierMorphism(w, Q, [["1"]])
    assert is_zero_in_crys(proj).zero


def test_equivariance_checked(F3x):
    T = square_zero(F3x, True)
    with pytest.raises(NotEquivariantError):
        CartierMorphism(T, T, [["x"]])
    Z = CartierModule.zero_map(ModulePresentation.free(F3x, 1))
    with pytest.raises(NotEquivariantError):
        CartierMorphism(Z, omega(F3x), [["1"]])


# table validation

def test_inconsistent_table_rejected(F3x):
    P = ModulePresentation(F3x, 1, [["x^2"]])
    with pytest.raises(InconsistentKappaError) as info:
        CartierModule(P, {(0, (1,)): ["1"]})
    assert "x^2*g0" in str(info.value)
    assert info.value.relation == 0


def test_table_key_validation(F3x):
    P = ModulePresentation.free(F3x, 1)
    with pytest.raises(ValueError, match="digit out of range"):
        CartierModule(P, {(0, (3,)): ["1"]})
    with pytest.raises(ValueError, match="generator index"):
        CartierModule(P, {(1, (0,)): ["1"]})
    with pytest.raises(ValueError, match="wrong length"):
        CartierModule(P, {(0, (0, 0)): ["1"]})


# properties against the F_p-linear oracle

FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(2, 2)]


def oracle_corpus(seed, count, max_fp_dim=6):
    rng = random.Random(seed)
    return [random_monomial_cartier(rng, FIELDS[k % 3], max_fp_dim) for k in range(count)]


def test_constructor_agrees_with_oracle_validity():
    rng = random.Random(99)
    accepted = rejected = 0
    for k in range(60):
        spec = FIELDS[k % 3]
        mod = random_monomial_cartier(rng, spec)
        # perturb one table entry, which may or may not break well-definedness
        key = (0, (rng.randrange(spec.q),) * mod.n)
        mod.table[key] = {rng.choice(mod.basis): 1}
        mod = MonomialCartier(spec, mod.n, mod.ideals, mod.table)
        if mod.well_defined():
            to_library(mod)
            accepted += 1
        else:
            with pytest.raises(InconsistentKappaError):
                to_library(mod)
            rejected += 1
    assert accepted and rejected


def test_nilpotence_matches_oracle_200():
    for mod in oracle_corpus(4242, 200):
        M = to_library(mod)
        v = image_chain(M)
        nil, order, estar = nilpotence_oracle(mod)
        assert (v.nilpotent, v.order, v.stabilization_exponent) == (nil, order, estar)
        if not v.nilpotent:
            assert not v.stabilized_image.is_zero()


def test_kappa_matrix_matches_oracle():
    for mod in oracle_corpus(8, 40):
        M = to_library(mod)
        basis, K = kappa_matrix(M)
        assert len(basis) * mod.e == mod.fp_dim
        if mod.e == 1:
            assert fp_rank(K, mod.p) == fp_rank(mod.kappa_matrix(), mod.p)


def test_semilinearity_500():
    rng = random.Random(500)
    mods = oracle_corpus(31, 25)
    for k in range(500):
        mod = mods[k % len(mods)]
        M = to_library(mod)
        ring = M.ring
        f = ring.zero()
        for _ in range(rng.randint(1, 3)):
            a = tuple(rng.randint(0, 3) for _ in range(ring.nvars))
            f = f + ring.monomial(a, rng.randrange(1, ring.q))
        m = [ring.zero() for _ in range(M.rank)]
        for _ in range(rng.randint(1, 3)):
            a = tuple(rng.randint(0, 4) for _ in range(ring.nvars))
            i = rng.randrange(M.rank)
            m[i] = m[i] + ring.monomial(a, rng.randrange(1, ring.q))
        lhs = kappa_apply(M, [f ** ring.q * c for c in m])
        rhs = M.presentation.polys(M.presentation.normal_form(
            M.presentation.element([f * c for c in kappa_apply(M, m)])))
        assert lhs == rhs


def test_semilinearity_free_modules():
    rng = random.Random(12)
    for _ in range(60):
        ring = PolynomialRing(FIELDS[rng.randrange(3)], ["x", "y"][: rng.randint(1, 2)])
        M = random_free(rng, ring, rng.randint(1, 2), 3)
        f = ring.monomial(tuple(rng.randint(0, 2) for _ in range(ring.nvars)), 1) + ring.one()
        m = [ring.monomial(tuple(rng.randint(0, 5) for _ in range(ring.nvars)), 1) for _ in range(M.rank)]
        assert kappa_apply(M, [f ** ring.q * c for c in m]) == tuple(f * c for c in kappa_apply(M, m))


def test_chain_monotonicity():
    for mod in oracle_corpus(77, 60):
        M = to_library(mod)
        chain = image_chain(M).chain
        for big, small in zip(chain, chain[1:]):
            assert all(big.contains(g) for g in small.gens)


def test_element_nilpotence_matches_oracle():
    for mod in oracle_corpus(606, 60):
        M = to_library(mod)
        p, D = mod.p, mod.fp_dim
        K = mod.kappa_matrix()
        mats = mod.action_matrices()
        for key in mod.basis:
            # F_p-span of R*m, closed under the action matrices
            span = [mod.fp_vector({key: 1})]
            while True:
                grown = span + [[sum(A[i][j] * v[j] for j in range(D)) % p for i in range(D)]
                                for A in mats for v in span]
                cols = [[row[c] for row in grown] for c in range(D)]
                if fp_rank(cols, p) == fp_rank([[row[c] for row in span] for c in range(D)], p):
                    break
                span = grown
            basis_cols = [[row[c] for row in span] for c in range(D)]
            expected = None
            for e in range(D + 1):
                if not any(any(x for x in row) for row in matmul(matpow(K, e, p), basis_cols, p)):
                    expected = e
                    break
            pos, a = key
            got = element_locally_nilpotent(M, {(pos, a): 1})
            assert got == expected


def test_stable_closure_minimality_100():
    rng = random.Random(1000)
    mods = oracle_corpus(55, 50)
    for k in range(100):
        mod = mods[k % len(mods)]
        M = to_library(mod)
        gens = [{rng.choice(mod.basis): 1} for _ in range(rng.randint(0, 2))]
        U = stable_closure(M, gens)
        for g in gens:
            assert U.contains(g)
        assert kappa_image(M, U.submodule).issubset(U.submodule)
        extra = gens + [{rng.choice(mod.basis): 1} for _ in range(rng.randint(0, 2))]
        S = stable_closure(M, extra)
        assert U.submodule.issubset(S.submodule)


def test_nil_iso_composition():
    for mod in oracle_corpus(313, 40):
        M = to_library(mod)
        inc1 = kappa_image_inclusion(M)
        N = inc1.source
        inc2 = kappa_image_inclusion(N)
        comp = inc1.compose(inc2)
        assert nil_isomorphism(inc1).is_nil_isomorphism
        assert nil_isomorphism(inc2).is_nil_isomorphism
        assert nil_isomorphism(comp).is_nil_isomorphism


def test_kernel_and_cokernel_are_cartier():
    for mod in oracle_corpus(21, 30):
        M = to_library(mod)
        S = cartier_direct_sum([M, M])
        proj = CartierMorphism(S, M, [g for g in M.presentation.gens()] * 2)
        K = proj.kernel()
        CartierSubmodule(S, K.submodule, check=True)
        C, _ = proj.cokernel()
        assert C.presentation.is_zero_module()
        assert nil_isomorphism(proj).is_nil_isomorphism == image_chain(K.module).nilpotent


def test_nilpotent_part_brute_force():
    checked = 0
    for mod in oracle_corpus(909, 80, max_fp_dim=4):
        M = to_library(mod)
        prev = None
        for e in range(mod.fp_dim + 1):
            part = nilpotent_part(M, e)
            brute = brute_nilpotent_part(mod, e)
            assert mod.p ** (part.dimension() * mod.e) == len(brute)
            assert image_chain(part.module).order is not None
            assert image_chain(part.module).order <= e
            if prev is not None:
                assert prev.submodule.issubset(part.submodule)
            prev = part
        checked += 1
    assert checked == 80
