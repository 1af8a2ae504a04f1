"""Close-pair certificates: coefficients, lemmas, builders, scrambling and the JSON form."""
import math
from fractions import Fraction

import numpy as np
import pytest

from certificates.certificate_store import (
    LocalCertificateStore,
    NullCertificateStore,
    certificate_key,
    get_certificate_store,
)
from certificates.dirichlet import dirichlet_coefficients
from certificates.halton_pair import floor_log_ratio, halton_close_pair, verify_certificate_chain
from certificates.halton_type_pair import case_setup, halton_type_close_pair, verify_halton_type_pair
from certificates.lemmas import (
    check_lifting_lemma,
    check_poly_divisibility_lemma,
    close_pair_bounds,
    close_pair_bounds_sweep,
    frobenius_holds,
    lifting_lemma_sweep,
    root_product_identity,
)
from certificates.logdomain import CheckStatus, LogValue, compare_logs, log_check, log_int
from certificates.model import CertificateVerdict, Family
from certificates.scrambling import (
    check_scrambler,
    random_lower_triangular,
    scrambled_digit_agreement,
    scrambled_faure_pair_bound,
)
from certificates.serialize import load_certificate, read_certificate, save_certificate, serialize_certificate
from certificates.verify import verify_certificate
from algebra.ffpoly import PolyOverFp
from geometry.radii import separation_scan
from sequences.digital import GeneratingMatrix, identity_matrix, matrix_width_for, pascal_matrix_power
from sequences.halton import IntegerBaseSet, halton_array
from sequences.polynomial import faure_bases, halton_type_prefix
from utils.config import QMCConfig, set_config
from utils.errors import CertificateInvalidError, InvalidInputError, ResourceCapError


@pytest.fixture(scope="module")
def halton_k2():
    cert = halton_close_pair(IntegerBaseSet((2, 3)), 2)
    verify_certificate_chain(cert)
    return cert


# --- log-domain comparisons ---------------------------------------------------

def test_log_int_of_huge_integer():
    assert log_int(2 ** 100000) == pytest.approx(100000 * math.log(2))
    with pytest.raises(InvalidInputError):
        log_int(0)


def test_compare_logs_three_way():
    assert compare_logs(1.0, 2.0) is CheckStatus.PASS
    assert compare_logs(2.0, 1.0) is CheckStatus.FAIL
    assert compare_logs(1.0, 1.0) is CheckStatus.INDETERMINATE


def test_log_values_of_huge_integers():
    m = LogValue.of_int(3 ** 50000)
    n = LogValue.of_int(2 ** 80000)
    assert (m * n).log == pytest.approx(50000 * math.log(3) + 80000 * math.log(2))
    assert (m / n).log == pytest.approx(50000 * math.log(3) - 80000 * math.log(2))
    assert (m ** 2).le(m * m) is CheckStatus.INDETERMINATE
    # 3^50000 is about 2^79248
    assert n.le(m) is CheckStatus.FAIL
    assert m.le(n) is CheckStatus.PASS
    assert log_check("3^50000 <= 2^80000", m.log, n.log).passed
    assert not log_check("2^80000 <= 3^50000", n.log, m.log).passed


# --- lemmas -------------------------------------------------------------------

def test_lifting():
    assert check_lifting_lemma(3, 2, 4)
    assert check_lifting_lemma(7, 3, 2)
    with pytest.raises(InvalidInputError):
        check_lifting_lemma(5, 3, 1)
    assert lifting_lemma_sweep(q_max=6, p_max=60, k_max=4).passed


def test_integer_close_pair_bounds():
    report = close_pair_bounds(IntegerBaseSet((2, 3)), k=2, ell=5, c=(1,))
    assert (report.n, report.m) == (192, 7968)
    assert report.passed
    assert close_pair_bounds_sweep(IntegerBaseSet((2, 3, 5)), k_max=2, ell_max=3, c_max=2).passed


def test_polynomial_proximity():
    x = PolyOverFp.x(2)
    verdict = check_poly_divisibility_lemma(1, 9, x, 3)
    assert verdict.applicable and verdict.holds
    assert verdict.gap == Fraction(1, 16)
    assert verdict.bound == Fraction(1, 8)
    assert not check_poly_divisibility_lemma(1, 3, x, 2).applicable


def test_root_product_and_frobenius():
    for p in (2, 3, 5):
        for w in range(3):
            assert root_product_identity(p, w)
    assert frobenius_holds(PolyOverFp.x(3), PolyOverFp.linear(2, 3), 2)


# --- coefficients ---------------------------------------------------------------

def test_two_bases_need_no_search():
    coeffs = dirichlet_coefficients(IntegerBaseSet((2, 3)), 2)
    assert coeffs.c == (1,)
    assert coeffs.r == 1
    assert coeffs.exponents(2) == (4,)
    assert coeffs.balanced


def test_three_bases_coefficients():
    coeffs = dirichlet_coefficients(IntegerBaseSet((2, 3, 5)), 10)
    assert coeffs.c == (230, 157)
    assert coeffs.residual <= 2.0 ** -10
    assert coeffs.balanced


def test_search_cap():
    set_config(QMCConfig(dirichlet_cap=100))
    with pytest.raises(ResourceCapError):
        dirichlet_coefficients(IntegerBaseSet((2, 3, 5)), 10)


def test_floor_log_ratio():
    assert floor_log_ratio(243, 2, 2) == 5
    assert floor_log_ratio(256, 2, 2) == 6
    with pytest.raises(InvalidInputError):
        floor_log_ratio(3, 2, 2)


# --- Halton certificates --------------------------------------------------------

def test_halton_k2_construction(halton_k2):
    cert = halton_k2
    assert (cert.n, cert.m, cert.N, cert.M, cert.ell) == (192, 7968, 59049, 243, 5)
    assert not cert.condition_met
    assert cert.verdict is CertificateVerdict.UNCONDITIONAL
    assert cert.success
    assert [cb.verified for cb in cert.coord_bounds] == [True, True]


def test_halton_k2_half_distance(halton_k2):
    expected = 0.5 * math.sqrt(128 ** -2 + 81 ** -2)
    assert halton_k2.half_distance() <= expected + 1e-15
    assert expected == pytest.approx(0.00730, abs=5e-6)


def test_halton_k7_full_chain():
    cert = halton_close_pair(IntegerBaseSet((2, 3)), 7)
    assert verify_certificate_chain(cert) is CertificateVerdict.PASS
    assert cert.condition_met
    assert cert.failed_checks() == []


def test_halton_needs_two_dimensions():
    with pytest.raises(InvalidInputError):
        halton_close_pair(IntegerBaseSet((2,)), 2)
    with pytest.raises(InvalidInputError):
        halton_close_pair(IntegerBaseSet((2, 3)), 0)


def test_index_cap():
    set_config(QMCConfig(index_bit_cap=100))
    with pytest.raises(ResourceCapError):
        halton_close_pair(IntegerBaseSet((2, 3)), 7)


@pytest.mark.slow
def test_halton_k2_scan_confirms_bound(halton_k2):
    q = separation_scan(halton_array(IntegerBaseSet((2, 3)), 59049), 59049)[-1].q
    assert q <= halton_k2.half_distance()


@pytest.mark.slow
def test_halton_three_bases_k10():
    cert = halton_close_pair(IntegerBaseSet((2, 3, 5)), 10)
    assert cert.c == (230, 157)
    assert verify_certificate_chain(cert, strict=False) is CertificateVerdict.PASS


# --- Halton-type certificates ---------------------------------------------------

def test_case1_pair():
    cert = halton_type_close_pair(1, p=2, w=2)
    assert (cert.n, cert.m, cert.N) == (1, 9, 16)
    assert cert.family is Family.HALTON_TYPE_CASE1
    assert cert.verdict is CertificateVerdict.PASS
    assert [Fraction(cb.gap_exact) for cb in cert.coord_bounds] == [Fraction(1, 16), Fraction(1, 16)]
    assert Fraction(cert.coord_bounds[0].bound_exact) == Fraction(1, 8)


@pytest.mark.parametrize("p,a", [(3, 0), (3, 1), (5, 2)])
def test_case1_other_fields(p, a):
    cert = halton_type_close_pair(1, p=p, w=1, a=a)
    assert cert.N == p ** p
    assert cert.verdict is CertificateVerdict.PASS


def test_case2_pair():
    cert = halton_type_close_pair(2, w=1)
    assert (cert.n, cert.m, cert.N) == (2, 8, 16)
    assert cert.d == 3
    assert cert.verdict is CertificateVerdict.PASS
    assert halton_type_close_pair(2, w=2).verdict is CertificateVerdict.PASS
    with pytest.raises(InvalidInputError):
        case_setup(2, p=3)


def test_case3_faure_pair():
    cert = halton_type_close_pair(3, p=3, w=1)
    assert (cert.n, cert.m, cert.N) == (1, 726, 729)
    assert cert.family is Family.FAURE
    assert Fraction(cert.coord_bounds[0].gap_exact) == Fraction(1, 729)
    assert cert.verdict is CertificateVerdict.PASS


@pytest.mark.parametrize("p,w", [(2, 1), (2, 3), (5, 1), (3, 2)])
def test_case3_other_orders(p, w):
    assert halton_type_close_pair(3, p=p, w=w).verdict is CertificateVerdict.PASS


def test_halton_type_pairs_bound_scanned_radius():
    for cert, bases in [(halton_type_close_pair(1, p=2, w=2), case_setup(1, 2, 2).bases),
                        (halton_type_close_pair(2, w=1), case_setup(2, None, 1).bases),
                        (halton_type_close_pair(3, p=3, w=1), faure_bases(3))]:
        q = separation_scan(halton_type_prefix(bases, cert.N), cert.N)[-1].q
        assert q <= cert.half_distance() + 1e-15


def test_tampered_halton_type_certificate_fails():
    cert = halton_type_close_pair(3, p=3, w=1)
    cert.m = 725
    assert verify_halton_type_pair(cert, strict=False) is CertificateVerdict.FAIL
    assert "indices match the construction" in cert.failed_checks()
    with pytest.raises(CertificateInvalidError):
        verify_halton_type_pair(cert)


def test_case_validation():
    with pytest.raises(InvalidInputError):
        case_setup(4)
    with pytest.raises(InvalidInputError):
        case_setup(1, p=3, a=3)
    with pytest.raises(InvalidInputError):
        case_setup(3, p=3, w=0)


# --- scrambling -----------------------------------------------------------------

def test_scrambler_validation():
    with pytest.raises(InvalidInputError):
        check_scrambler(pascal_matrix_power(2, 1, 4, 4))
    with pytest.raises(InvalidInputError):
        check_scrambler(GeneratingMatrix(3, np.array([[1, 0], [1, 0]])))
    with pytest.raises(InvalidInputError):
        check_scrambler(GeneratingMatrix(3, np.ones((2, 3), dtype=np.int64)))


def test_scrambling_keeps_shared_prefixes():
    rng = np.random.default_rng(0)
    size = matrix_width_for(3, 729)
    assert size == 7
    for c in range(3):
        C = pascal_matrix_power(3, c, size, size)
        for _ in range(20):
            L = random_lower_triangular(3, size, rng, unit_diagonal=False)
            verdict = scrambled_digit_agreement(C, L, [(1, 726), (0, 5), (3, 3)])
            assert verdict.preserved


def test_identical_outputs_count_as_longest_prefix():
    C = identity_matrix(2, 4)
    verdict = scrambled_digit_agreement(C, identity_matrix(2, 4), [(6, 6)])
    assert verdict.pairs[0].shared_before == -1
    assert verdict.preserved


def test_scrambler_size_must_match():
    with pytest.raises(InvalidInputError):
        scrambled_digit_agreement(identity_matrix(2, 4), identity_matrix(2, 5), [(1, 2)])


def test_scrambled_faure_pair_bound():
    plain = scrambled_faure_pair_bound(3, 1, Ls=[identity_matrix(3, 6), identity_matrix(3, 6)])
    assert (plain.n1, plain.n2, plain.N) == (1, 726, 729)
    assert plain.holds
    assert plain.limit == Fraction(11, 3 ** 6)
    rng = np.random.default_rng(7)
    for _ in range(10):
        assert scrambled_faure_pair_bound(3, 1, rng=rng).holds


def test_scrambled_bound_depth_cap():
    with pytest.raises(ResourceCapError):
        scrambled_faure_pair_bound(3, 4)


# --- JSON form and storage ------------------------------------------------------

def test_certificate_file_reverifies(tmp_path, halton_k2):
    path = tmp_path / "halton.json"
    save_certificate(str(path), halton_k2)
    loaded = read_certificate(str(path))
    assert (loaded.n, loaded.m, loaded.N) == (192, 7968, 59049)
    assert verify_certificate(loaded) is CertificateVerdict.UNCONDITIONAL
    assert serialize_certificate(loaded) == serialize_certificate(halton_k2)


def test_loaded_halton_type_certificate_reverifies():
    data = serialize_certificate(halton_type_close_pair(2, w=1))
    assert data["m_dec"] == "8"
    assert verify_certificate(load_certificate(data)) is CertificateVerdict.PASS


def test_tampered_file_is_rejected(halton_k2):
    data = serialize_certificate(halton_k2)
    data["m_dec"] = "7969"
    cert = load_certificate(data)
    assert verify_certificate(cert, strict=False) is CertificateVerdict.FAIL
    with pytest.raises(CertificateInvalidError):
        verify_certificate(load_certificate(data))


def test_malformed_certificate():
    with pytest.raises(InvalidInputError):
        load_certificate({"family": "halton"})
    with pytest.raises(InvalidInputError):
        load_certificate({"family": "nope", "params": {}, "n_dec": "1", "m_dec": "2", "N_dec": "3"})


def test_certificate_key_is_order_independent():
    a = certificate_key("halton", bases="2,3", k=2)
    assert a == certificate_key("halton", k=2, bases="2,3")
    assert a != certificate_key("halton", bases="2,3", k=7)
    assert a.startswith("halton_")


def test_local_store(tmp_path):
    store = LocalCertificateStore(str(tmp_path / "cache"))
    key = certificate_key("faure", p=3, w=1)
    data = serialize_certificate(halton_type_close_pair(3, p=3, w=1))
    assert store.get(key) is None
    store.set(key, data)
    assert store.exists(key)
    assert store.get(key) == data
    assert store.delete(key)
    assert not store.exists(key)


def test_default_store_caches_nothing():
    store = get_certificate_store()
    assert isinstance(store, NullCertificateStore)
    assert not store.is_available
    store.set("k", {"a": 1})
    assert store.get("k") is None


def test_case2_difference_polynomial():
    s = case_setup(2, None, 1)
    x, x1 = PolyOverFp.x(2), PolyOverFp.linear(1, 2)
    assert s.n2 - s.n1 == x * x1 * x1
    assert s.two_c_sq == 6
