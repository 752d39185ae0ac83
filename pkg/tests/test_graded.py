"""Signs, shuffles, shufflers and normal forms."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linfrep.core.errors import ShapeMismatchError
from linfrep.core.graded import (
    GradedElement, GradedSpace, IdentityBlock, OperatorOnTensors, TensorSpace, add_term, apply_operator_tensor,
    apply_permutation, apply_shuffler, enumerate_shuffles, exterior_basis, koszul_sign, parity_sign, permute_key,
    signature, skew_normalize, sparse_equal, sym_normalize, symmetric_basis, unshuffle_terms,
)

SL2 = GradedSpace.from_basis("sl2", [("e", 0), ("f", 0), ("h", 0)])
ODD = GradedSpace.from_basis("odd", [("x", 0), ("y", 0), ("c", -1), ("u", 1)])


@st.composite
def graded_spaces(draw, max_dim=4):
    degrees = draw(st.lists(st.integers(-2, 2), min_size=1, max_size=max_dim))
    return GradedSpace.from_basis("V", [(f"x{k}", d) for k, d in enumerate(degrees)])


@st.composite
def keyed_spaces(draw, min_len=1, max_len=5):
    space = draw(graded_spaces())
    key = tuple(draw(st.lists(st.sampled_from(space.labels), min_size=min_len, max_size=max_len)))
    return space, key


def basis_tensor(space: GradedSpace, key) -> GradedElement:
    return GradedElement(TensorSpace.power(space, len(key)), {tuple(key): Fraction(1)})


# ============================================================================
# Signs
# ============================================================================

def test_signature_examples():
    assert signature((0, 1, 2)) == 1
    assert signature((1, 0)) == -1
    assert signature((1, 2, 0)) == 1


def test_koszul_examples():
    assert koszul_sign((1, 0), (1, 1)) == -1
    assert koszul_sign((1, 0), (1, 2)) == 1
    assert koszul_sign((0, 1, 2), (1, 3, 5)) == 1


def test_koszul_length_mismatch():
    with pytest.raises(ShapeMismatchError):
        koszul_sign((1, 0), (1, 1, 1))


@settings(max_examples=500, deadline=None)
@given(data=st.data())
def test_permutation_action_is_a_cocycle(data):
    space, key = data.draw(keyed_spaces(min_len=2))
    n = len(key)
    p = tuple(data.draw(st.permutations(range(n))))
    q = tuple(data.draw(st.permutations(range(n))))
    composite = tuple(p[q[k]] for k in range(n))
    x = basis_tensor(space, key)
    twice = apply_permutation(q, apply_permutation(p, x))
    once = apply_permutation(composite, x)
    assert twice.terms == once.terms
    assert signature(composite) == signature(p) * signature(q)


# ============================================================================
# Shuffles and shufflers
# ============================================================================

@pytest.mark.parametrize("sizes, count", [((1, 1), 2), ((2, 1), 3), ((1, 1, 1), 6), ((2, 2), 6), ((3,), 1)])
def test_shuffle_counts(sizes, count):
    shuffles = enumerate_shuffles(sizes)
    assert len(shuffles) == count
    assert len(set(shuffles)) == count


def test_negative_block_gives_no_shuffles():
    assert enumerate_shuffles((2, -1)) == []


@settings(max_examples=100, deadline=None)
@given(sizes=st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_shuffles_increase_on_blocks(sizes):
    shuffles = enumerate_shuffles(sizes)
    total = sum(sizes)
    expected = math.factorial(total)
    for s in sizes:
        expected //= math.factorial(s)
    assert len(shuffles) == expected
    for p in shuffles:
        pos = 0
        for s in sizes:
            block = p[pos:pos + s]
            assert list(block) == sorted(block)
            pos += s


def test_shuffler_examples():
    xy = GradedElement(TensorSpace.power(SL2, 2), {("e", "f"): Fraction(1)})
    assert apply_shuffler("skew", (1, 1), xy).terms == {("e", "f"): 1, ("f", "e"): -1}
    assert apply_shuffler("sym", (1, 1), xy).terms == {("e", "f"): 1, ("f", "e"): 1}
    odd = GradedSpace.from_basis("W", [("x", 1)])
    xx = GradedElement(TensorSpace.power(odd, 2), {("x", "x"): Fraction(1)})
    assert apply_shuffler("skew", (1, 1), xx).terms == {("x", "x"): 2}


def test_unknown_shuffler_variant():
    xy = GradedElement(TensorSpace.power(SL2, 2), {("e", "f"): Fraction(1)})
    with pytest.raises(ValueError, match="Available"):
        apply_shuffler("wedge", (1, 1), xy)


@settings(max_examples=500, deadline=None)
@given(data=st.data(), variant=st.sampled_from(["skew", "sym"]))
def test_shuffler_associativity(data, variant):
    space = data.draw(graded_spaces())
    i, j, k = (data.draw(st.integers(0, 2)) for _ in range(3))
    n = i + j + k
    key = tuple(data.draw(st.lists(st.sampled_from(space.labels), min_size=n, max_size=n)))
    x = basis_tensor(space, key)
    lhs = apply_shuffler(variant, (i, j, k), x)
    rhs = {}
    for ykey, c in apply_shuffler(variant, (i + j, k), x).terms.items():
        inner = GradedElement(TensorSpace.power(space, i + j), {ykey[:i + j]: c})
        for zkey, d in apply_shuffler(variant, (i, j), inner).terms.items():
            add_term(rhs, zkey + ykey[i + j:], d)
    assert sparse_equal(lhs.terms, rhs)


def key_degree(space: GradedSpace, key) -> int:
    return sum(space.degree_of(label) for label in key)


@settings(max_examples=300, deadline=None)
@given(data=st.data(), variant=st.sampled_from(["skew", "sym"]))
def test_shuffler_unitality(data, variant):
    space, key = data.draw(keyed_spaces(min_len=2))
    n = len(key)
    x = basis_tensor(space, key)
    assert sparse_equal(apply_shuffler(variant, (n, 0), x).terms, x.terms)
    assert sparse_equal(apply_shuffler(variant, (0, n), x).terms, x.terms)

    # peel the last letter off: it ends either block
    i = data.draw(st.integers(0, n))
    j = n - i
    last, head = key[-1], basis_tensor(space, key[:-1])
    rhs = {}
    if j >= 1:
        for k, c in apply_shuffler(variant, (i, j - 1), head).terms.items():
            add_term(rhs, k + (last,), c)
    if i >= 1:
        for k, c in apply_shuffler(variant, (i - 1, j), head).terms.items():
            y, z = k[:i - 1], k[i - 1:]
            sign = parity_sign(space.degree_of(last) * key_degree(space, z))
            if variant == "skew":
                sign *= parity_sign(j)
            add_term(rhs, y + (last,) + z, sign * c)
    assert sparse_equal(apply_shuffler(variant, (i, j), x).terms, rhs)


@settings(max_examples=300, deadline=None)
@given(data=st.data(), variant=st.sampled_from(["skew", "sym"]))
def test_shuffler_symmetry(data, variant):
    space = data.draw(graded_spaces())
    sizes = data.draw(st.lists(st.integers(0, 2), min_size=2, max_size=3))
    t = data.draw(st.integers(0, len(sizes) - 2))
    n = sum(sizes)
    key = tuple(data.draw(st.lists(st.sampled_from(space.labels), min_size=n, max_size=n)))
    x = basis_tensor(space, key)
    swapped = list(sizes)
    swapped[t], swapped[t + 1] = swapped[t + 1], swapped[t]
    start = sum(sizes[:t])
    a, b = sizes[t], sizes[t + 1]
    rhs = {}
    for k, c in apply_shuffler(variant, tuple(sizes), x).terms.items():
        left, first, second, right = k[:start], k[start:start + a], k[start + a:start + a + b], k[start + a + b:]
        sign = parity_sign(key_degree(space, first) * key_degree(space, second))
        if variant == "skew":
            sign *= parity_sign(a * b)
        add_term(rhs, left + second + first + right, sign * c)
    assert sparse_equal(apply_shuffler(variant, tuple(swapped), x).terms, rhs)


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_unshuffle_terms_select_ordered_blocks(data):
    space, key = data.draw(keyed_spaces())
    n = len(key)
    k = data.draw(st.integers(0, n))
    degrees = tuple(space.degree_of(label) for label in key)
    terms = unshuffle_terms(key, degrees, (k, n - k))
    assert len(terms) == math.comb(n, k)
    for (left, right), eps in terms:
        assert sorted(left + right) == sorted(key)
        assert eps in (1, -1)


# ============================================================================
# Normal forms
# ============================================================================

def test_normal_form_examples():
    assert skew_normalize(("e", "h"), SL2) == (("e", "h"), 1)
    assert skew_normalize(("h", "e"), SL2) == (("e", "h"), -1)
    assert skew_normalize(("e", "e"), SL2) is None
    assert skew_normalize(("c", "c"), ODD) == (("c", "c"), 1)
    assert sym_normalize(("h", "e"), SL2) == (("e", "h"), 1)
    assert sym_normalize(("c", "c"), ODD) is None
    assert sym_normalize(("x", "x"), ODD) == (("x", "x"), 1)


def test_bases():
    assert exterior_basis(SL2, 2) == (("e", "f"), ("e", "h"), ("f", "h"))
    assert len(symmetric_basis(SL2, 2)) == 6
    assert ("c", "c") in exterior_basis(ODD, 2)
    assert ("c", "c") not in symmetric_basis(ODD, 2)


@settings(max_examples=500, deadline=None)
@given(data=st.data(), skew=st.booleans())
def test_normal_forms_are_sign_consistent(data, skew):
    space, key = data.draw(keyed_spaces())
    normalize = skew_normalize if skew else sym_normalize
    p = tuple(data.draw(st.permutations(range(len(key)))))
    permuted = permute_key(p, key)
    base, moved = normalize(key, space), normalize(permuted, space)
    assert (base is None) == (moved is None)
    if base is None:
        return
    assert moved[0] == base[0]
    assert normalize(base[0], space) == (base[0], 1)
    degrees = tuple(space.degree_of(label) for label in key)
    eps = koszul_sign(p, degrees) * (signature(p) if skew else 1)
    assert moved[1] == eps * base[1]


# ============================================================================
# Tensor operators
# ============================================================================

def test_operator_interchange_sign():
    V = GradedSpace.from_basis("V", [("u", 0), ("w", 1)])
    shift = OperatorOnTensors(TensorSpace((V,)), TensorSpace((V,)), 1, {("u",): {("w",): Fraction(1)}})
    element = GradedElement(TensorSpace((ODD, V)), {("u", "u"): Fraction(1)})
    out = apply_operator_tensor([IdentityBlock(1), shift], element)
    assert out.terms == {("u", "w"): -1}
    out = apply_operator_tensor([IdentityBlock(1), IdentityBlock(1)], element)
    assert out.terms == element.terms
