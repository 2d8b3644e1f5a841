import numpy as np
import pytest

from nonfreeness import fock, models
from nonfreeness.errors import CapacityError, ValidationError
from nonfreeness.measures import nonfreeness, nonfreeness_pure
from nonfreeness.spectra import one_pdm
from nonfreeness.states import expected_particle_number


class TestSlaterState:
    def test_basis_orbitals(self):
        psi = models.slater_state(np.eye(4)[:, [1, 3]])
        assert psi.as_dict() == {fock.occupation([1, 3]): pytest.approx(1.0)}

    def test_invariant_under_orbital_mixing(self, rng):
        # U -> U V changes only the global phase det(V)
        U = models.random_orbitals(5, 2, rng)
        V = models.random_orbitals(2, 2, rng)
        a, b = models.slater_state(U).amplitudes, models.slater_state(U @ V).amplitudes
        assert abs(abs(np.vdot(a, b)) - 1) < 1e-12

    def test_one_pdm_is_projector(self, rng):
        U = models.random_orbitals(6, 3, rng)
        np.testing.assert_allclose(one_pdm(models.slater_state(U)), U @ U.conj().T, atol=1e-12)


class TestDoubleSlater:
    def test_m1_is_free(self):
        # (|10> + |01>)/sqrt2 is itself a Slater determinant
        assert nonfreeness_pure(models.double_slater(1)) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_value_is_2m(self, m):
        assert nonfreeness_pure(models.double_slater(m)) == pytest.approx(2 * m, abs=1e-9)

    def test_amplitudes(self):
        assert models.double_slater(2).as_dict() == {
            0b0011: pytest.approx(2 ** -0.5), 0b1100: pytest.approx(2 ** -0.5)}

    def test_bad_parameters(self):
        with pytest.raises(ValidationError):
            models.double_slater(0)
        with pytest.raises(CapacityError):
            models.double_slater(9)


class TestHeisenberg:
    def test_two_sites(self):
        psi = models.heisenberg_ground_fermionic(models.LatticeSpec(2))
        assert nonfreeness(psi).nonfreeness == pytest.approx(4.0, abs=1e-8)

    def test_chain_and_ring(self):
        for geometry in ("chain", "ring"):
            psi = models.heisenberg_ground_fermionic(models.LatticeSpec(4, geometry))
            assert nonfreeness(psi).nonfreeness == pytest.approx(8.0, abs=1e-8)

    def test_ground_energy_of_singlet(self):
        H, _ = models.heisenberg_hamiltonian(models.LatticeSpec(2))
        np.testing.assert_allclose(np.linalg.eigvalsh(H), [-0.75, 0.25], atol=1e-14)

    def test_four_site_ring_energy(self):
        H, _ = models.heisenberg_hamiltonian(models.LatticeSpec(4))
        assert np.linalg.eigvalsh(H)[0] == pytest.approx(-2.0, abs=1e-12)

    def test_one_electron_per_site(self):
        psi = models.heisenberg_ground_fermionic(models.LatticeSpec(4))
        assert psi.n == 4
        for occ in psi.as_dict():
            for i in range(4):
                assert (occ >> 2 * i) & 3 in (1, 2)

    def test_half_filled_one_pdm(self):
        psi = models.heisenberg_ground_fermionic(models.LatticeSpec(6))
        np.testing.assert_allclose(one_pdm(psi), 0.5 * np.eye(12), atol=1e-9)

    @pytest.mark.parametrize("sites", [0, 3, 5])
    def test_rejects_odd_or_empty(self, sites):
        with pytest.raises(ValidationError):
            models.LatticeSpec(sites)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            models.LatticeSpec(10)

    def test_site_bipartition(self):
        b = models.site_bipartition(1, 3)
        assert b.part1 == (2, 3) and b.d == 6


class TestRandom:
    @pytest.mark.parametrize("kind", models.KINDS)
    def test_deterministic(self, kind):
        a = models.random_state(kind, 4, 11)
        b = models.random_state(kind, 4, 11)
        if kind == "block_independent":
            assert a[1] == b[1]
            a, b = a[0], b[0]
        assert a.distance(b) == 0

    def test_random_slater_is_free(self, rng):
        for _ in range(5):
            assert nonfreeness_pure(models.random_slater(6, rng)) < 1e-9

    def test_random_rank2_has_rank_two(self, rng):
        for _ in range(10):
            assert nonfreeness(models.random_rank2(4, rng)).rank <= 2

    def test_block_independent_has_sharp_part_number(self, rng):
        for _ in range(10):
            rho, b = models.random_block_independent(5, rng)
            # a sharp part-1 number kills the part1/part2 coupling in gamma
            gamma = one_pdm(rho)
            cross = gamma[np.ix_(list(b.part1), list(b.part2))]
            assert np.abs(cross).max() < 1e-12

    def test_rotate_preserves_spectrum_and_moves_gamma(self, rng):
        rho = models.random_mixed(4, rng)
        U = models.random_orbitals(4, 4, rng)
        out = models.rotate(rho, U)
        assert expected_particle_number(out) == pytest.approx(expected_particle_number(rho))
        np.testing.assert_allclose(one_pdm(out), U @ one_pdm(rho) @ U.conj().T, atol=1e-12)
        assert nonfreeness(out).nonfreeness == pytest.approx(nonfreeness(rho).nonfreeness, abs=1e-9)

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            models.random_state("gaussian", 3, 0)
