import numpy as np
import pytest

from maf.automorphy import functional_equation_residual
from maf.config import build_system, load_bundled
from maf.fields import Grid, quad2d_nodes
from maf.spectral import (
    SpectralBasis,
    WeightedInnerProduct,
    hermite,
    kernel,
    kernel_eigen_residual,
    kernel_invariance_residual,
    laguerre,
    landau_level,
    project,
    project_on_nodes,
    rayleigh_quotient,
    select_laguerre_scale,
    spectrum_table,
    strip_eigenfunction,
    truncation_radius,
)

CENTRAL = [0.0, 0.4 + 0.3j, -0.6 + 0.8j, 1.1 - 0.5j, -0.9 - 1.2j]


@pytest.fixture(scope="module")
def landau():
    return build_system(load_bundled("landau"))


@pytest.fixture(scope="module")
def conj():
    return build_system(load_bundled("conjugate"))


@pytest.fixture(scope="module")
def alt():
    return build_system(load_bundled("alteration"))


class TestSpecialFunctions:
    def test_hermite_values(self):
        assert hermite(0, 5.0) == 1.0
        assert hermite(1, 3.0) == 6.0
        assert hermite(2, 1.0) == 2.0  # 4x^2 - 2
        assert hermite(3, 2.0) == 40.0  # 8x^3 - 12x

    def test_hermite_array(self):
        x = np.array([0.0, 1.0])
        assert np.allclose(hermite(2, x), [-2.0, 2.0])

    def test_hermite_negative_degree(self):
        with pytest.raises(ValueError):
            hermite(-1, 0.0)

    def test_laguerre_values(self):
        assert laguerre(0, 7.0) == 1.0
        assert laguerre(1, 1.0) == 0.0
        assert laguerre(2, 2.0) == -1.0  # (x^2 - 4x + 2)/2
        assert abs(laguerre(3, 1.0) + 2.0 / 3.0) < 1e-14  # (-x^3 + 9x^2 - 18x + 6)/6

    def test_laguerre_array(self):
        x = np.array([0.0, 1.0])
        assert np.allclose(laguerre(1, x), [1.0, 0.0])


class TestLandauLevels:
    def test_values(self):
        assert landau_level(1.0, 0) == -2.0
        assert landau_level(1.5, 2) == -15.0

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            landau_level(0.0, 0)
        with pytest.raises(ValueError):
            landau_level(1.0, -1)

    def test_table(self):
        rows = spectrum_table(1.0, 2)
        assert [r["lambda"] for r in rows] == [-2.0, -6.0, -10.0]


class TestStripEigenfunctions:
    def test_ground_state_value_at_origin(self, landau):
        basis = SpectralBasis(B=landau.B, alpha=0.0)
        psi = strip_eigenfunction(basis, landau, 0, 0)
        assert abs(psi(0.0) - 1.0) < 1e-14

    def test_rayleigh_quotients_exact(self, conj):
        basis = SpectralBasis(B=conj.B, alpha=0.25)
        for m in range(3):
            psi = strip_eigenfunction(basis, conj, m, 0)
            rq = rayleigh_quotient(conj, psi, CENTRAL)
            assert abs(rq - landau_level(conj.B, m)) < 1e-4 * abs(landau_level(conj.B, m))

    def test_rayleigh_with_gauge(self, alt):
        basis = SpectralBasis(B=alt.B, alpha=0.0)
        psi = strip_eigenfunction(basis, alt, 1, 0)
        rq = rayleigh_quotient(alt, psi, CENTRAL)
        assert abs(rq - landau_level(alt.B, 1)) < 1e-3

    def test_automorphy_under_strip_translation(self, landau):
        # psi_{m,n} transforms under z -> z + 1 with character e^{2 pi i alpha}
        alpha = 0.25
        basis = SpectralBasis(B=landau.B, alpha=alpha)
        psi = strip_eigenfunction(basis, landau, 0, 0)
        from maf.automorphy import CharacterTable, PseudoCharacter
        from maf.groups import DiscreteSubgroup, GroupElement

        gamma = DiscreteSubgroup([GroupElement(1, 1)])
        table = CharacterTable(
            PseudoCharacter([np.exp(2j * np.pi * alpha)]), gamma, landau.nu, landau.mu,
            landau.rho, max_len=4,
        )
        rep = functional_equation_residual(
            psi, landau.nu, landau.mu, landau.rho, landau.tau, table,
            gamma.generators[0], Grid(nx=5, ny=5),
        )
        assert rep.max_residual < 1e-8

    def test_basis_validation(self):
        with pytest.raises(ValueError):
            SpectralBasis(B=-1.0)
        with pytest.raises(ValueError):
            SpectralBasis(B=1.0, alpha=1.0)


class TestKernel:
    def test_diagonal_value(self, landau, alt):
        for sys in (landau, alt):
            assert abs(kernel(sys, 0, 0.7 + 0.1j, 0.7 + 0.1j) - sys.B / np.pi) < 1e-12

    def test_hermitian(self, alt):
        z, w = 0.4 + 0.9j, -0.3 + 0.2j
        assert abs(kernel(alt, 1, z, w) - kernel(alt, 1, w, z).conjugate()) < 1e-12

    def test_eigen_equation(self, landau, conj, alt):
        for sys in (landau, conj, alt):
            for k in (0, 1):
                assert kernel_eigen_residual(sys, k, 0.1 + 0.05j, CENTRAL) < 1e-6

    def test_scale_adjudication(self, alt):
        verdict = select_laguerre_scale(alt)
        assert verdict["scale"] == 1.0
        assert verdict["pass"]
        assert float(verdict["residuals"]["2.0"]) > 1e-2

    def test_invariance(self, conj, alt):
        from maf.groups import GroupElement

        pairs = [(0.3 + 0.1j, -0.4 + 0.7j), (1.0, 0.5j), (-0.8 - 0.2j, 0.2 + 0.9j)]
        for sys in (conj, alt):
            g = GroupElement(np.exp(0.6j), 0.4 - 0.3j)
            for k in (0, 1):
                assert kernel_invariance_residual(sys, k, g, pairs).passed

    def test_invariance_subgroup_generators(self, alt):
        pairs = [(0.2 + 0.4j, -0.1 - 0.3j), (0.9, -0.5j)]
        for g in alt.gamma.generators:
            assert kernel_invariance_residual(alt, 0, g, pairs).passed


@pytest.fixture(scope="module")
def nodes(landau):
    R = truncation_radius(landau.B)
    return quad2d_nodes((-R, R, -R, R), 48)


class TestProjector:
    def test_truncation_radius(self):
        R = truncation_radius(1.0)
        assert abs(np.exp(-(R**2) / 8) - 1e-8) < 1e-12

    def test_idempotent(self, landau, nodes):
        Z, Wt = nodes
        fvals = np.exp(-np.abs(Z - 0.3) ** 2)
        p1 = project_on_nodes(landau, 0, fvals, Z, Wt)
        p2 = project_on_nodes(landau, 0, p1, Z, Wt)
        central = np.abs(Z) < 2.0
        scale = np.abs(p1[central]).max()
        assert np.abs((p2 - p1)[central]).max() / scale < 1e-4

    def test_cross_levels_orthogonal(self, landau, nodes):
        Z, Wt = nodes
        fvals = np.exp(-np.abs(Z - 0.3) ** 2)
        p0 = project_on_nodes(landau, 0, fvals, Z, Wt)
        p10 = project_on_nodes(landau, 1, p0, Z, Wt)
        central = np.abs(Z) < 2.0
        scale = np.abs(p0[central]).max()
        assert np.abs(p10[central]).max() / scale < 1e-3

    def test_reproduces_own_level(self, landau):
        # P_0 fixes the lowest-level state and kills the first excited one
        basis = SpectralBasis(B=landau.B, alpha=0.0)
        psi0 = strip_eigenfunction(basis, landau, 0, 0)
        psi1 = strip_eigenfunction(basis, landau, 1, 0)
        for z in (0.0, 0.5 + 0.3j, -0.7 - 0.4j):
            assert abs(project(landau, 0, psi0, z) - psi0(z)) < 1e-4
            assert abs(project(landau, 0, psi1, z)) < 1e-6


class TestWeightedInnerProduct:
    def test_weight_collapses_to_field(self, conj):
        wip = WeightedInnerProduct(conj.nu, conj.mu, conj.tau, (-4, 4, -4, 4))
        for z in (0.5 + 0.5j, 1.2 - 0.3j):
            assert abs(wip.weight(z) - np.exp(-conj.B * abs(z) ** 2)) < 1e-6

    def test_gaussian_norm(self, landau):
        wip = WeightedInnerProduct(landau.nu, landau.mu, landau.tau, (-6, 6, -6, 6))
        val = wip(lambda z: 1.0, lambda z: 1.0, n_quad=64)
        assert abs(val - np.pi / landau.B) < 1e-8

    def test_levels_orthogonal(self, landau):
        # psi_{0,0} and psi_{1,0} carry the weight already; strip the
        # Gaussian so the weighted product supplies it once
        basis = SpectralBasis(B=landau.B, alpha=0.0)
        psi0 = strip_eigenfunction(basis, landau, 0, 0)
        psi1 = strip_eigenfunction(basis, landau, 1, 0)
        B = landau.B

        def bare(psi):
            return lambda z: psi(z) * np.exp((B / 2) * abs(z) ** 2)

        wip = WeightedInnerProduct(landau.nu, landau.mu, landau.tau, (-5, 5, -5, 5))
        cross = wip(bare(psi0), bare(psi1), n_quad=64)
        norm = wip(bare(psi0), bare(psi0), n_quad=64)
        assert abs(cross) / abs(norm) < 1e-8
