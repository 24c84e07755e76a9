//! Photon-number conditioning of the probe and parity-target overlaps.
//!
//! Two-qubit basis index is `2a + b` with `a`, `b` the Alice/Bob excitation
//! numbers. In polarization terms `|00⟩ = VH`, `|01⟩ = VV`, `|10⟩ = HH` and
//! `|11⟩ = HV`.

use num_complex::Complex64;

use super::qubit::QubitAmplitudes;
use super::state::HybridState;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Smallest `P(n)` we are willing to divide by.
pub const MIN_CONDITIONING_PROBABILITY: f64 = 1e-300;

/// Alice ⊗ Bob operator in the `{|00⟩, |01⟩, |10⟩, |11⟩}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbMatrix(pub [[Complex64; 4]; 4]);

impl AbMatrix {
    pub fn zeros() -> Self {
        Self([[ZERO; 4]; 4])
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// `⟨ψ|M|ψ⟩`
    pub fn expectation(&self, psi: &[Complex64; 4]) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..4 {
            for j in 0..4 {
                acc += psi[i].conj() * self.0[i][j] * psi[j];
            }
        }
        acc
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }
}

/// `⟨n|ρ_AB,P|n⟩`, the unnormalized Alice–Bob operator for probe count `n`.
pub fn probe_projection(state: &HybridState, n: usize) -> AbMatrix {
    let mut m = AbMatrix::zeros();
    for t in &state.terms {
        m.0[t.ket_index()][t.bra_index()] += t.dyad.fock_element(n);
    }
    m
}

/// Probability of counting `n` probe photons.
pub fn photon_count_prob(state: &HybridState, n: usize) -> f64 {
    state
        .terms
        .iter()
        .filter(|t| t.is_diagonal())
        .map(|t| t.dyad.fock_element(n))
        .sum::<Complex64>()
        .re
}

/// Normalized Alice–Bob state heralded by `n` probe photons, with its weight `P(n)`.
pub fn conditional_ab_state(state: &HybridState, n: usize) -> Result<(AbMatrix, f64)> {
    let m = probe_projection(state, n);
    let p = m.trace().re;
    if !(p > MIN_CONDITIONING_PROBABILITY) {
        return Err(Error::Unconditionable { n, probability: p });
    }
    Ok((m.scale(1.0 / p), p))
}

/// Unnormalized heralded target: even `βα′|10⟩ + αβ′|01⟩` for `n = 0`, odd
/// `ββ′|11⟩ + (−1)ⁿ αα′|00⟩` for `n >= 1`.
fn raw_target(qa: &QubitAmplitudes, qb: &QubitAmplitudes, n: usize) -> [Complex64; 4] {
    let mut psi = [ZERO; 4];
    if n == 0 {
        psi[0b10] = qa.a1 * qb.a0;
        psi[0b01] = qa.a0 * qb.a1;
    } else {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        psi[0b11] = qa.a1 * qb.a1;
        psi[0b00] = qa.a0 * qb.a0 * sign;
    }
    psi
}

/// Normalized parity target the gate heralds after counting `n` photons.
pub fn parity_target(qa: &QubitAmplitudes, qb: &QubitAmplitudes, n: usize) -> Result<[Complex64; 4]> {
    let mut psi = raw_target(qa, qb, n);
    let norm = libm::sqrt(psi.iter().map(|c| c.norm_sqr()).sum::<f64>());
    if norm == 0.0 {
        return Err(Error::UndefinedTarget { n });
    }
    for c in psi.iter_mut() {
        *c /= norm;
    }
    Ok(psi)
}

/// Fidelity of a heralded conditional state with the parity target for `n`.
pub fn success_overlap(
    conditional: &AbMatrix,
    qa: &QubitAmplitudes,
    qb: &QubitAmplitudes,
    n: usize,
) -> Result<f64> {
    let psi = parity_target(qa, qb, n)?;
    Ok(conditional.expectation(&psi).re)
}

/// Success probabilities of one gate run, `P(0)·F₀` and `Σ_{n=1}^{n_max} P(n)·F_n`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BranchSuccess {
    pub even: f64,
    pub odd: f64,
    /// Set when a target had zero norm; that branch then contributes nothing.
    pub degenerate: bool,
}

/// Sums `⟨ψ_n|⟨n|ρ|n⟩|ψ_n⟩` over `n = 0..=n_max`.
///
/// The odd-branch sum is regrouped per dyad: only the parity of `n` changes the
/// target, so each dyad needs its Fock weights summed separately over odd and
/// over even `n >= 2`. Weights are evaluated only where the Poisson envelope of
/// `|u||v|` is above ~e^{-100}.
pub fn branch_success(
    state: &HybridState,
    qa: &QubitAmplitudes,
    qb: &QubitAmplitudes,
    n_max: usize,
) -> BranchSuccess {
    let mut out = BranchSuccess::default();

    match parity_target(qa, qb, 0) {
        Ok(psi) => {
            let mut acc = ZERO;
            for t in &state.terms {
                let w = psi[t.ket_index()].conj() * psi[t.bra_index()];
                if w != ZERO {
                    acc += w * t.dyad.fock_element(0);
                }
            }
            out.even = acc.re;
        }
        Err(_) => out.degenerate = true,
    }

    let (odd_target, even_target) = match (parity_target(qa, qb, 1), parity_target(qa, qb, 2)) {
        (Ok(o), Ok(e)) => (o, e),
        _ => {
            out.degenerate = true;
            return out;
        }
    };
    let mut acc = ZERO;
    for t in &state.terms {
        let (i, j) = (t.ket_index(), t.bra_index());
        let w_odd = odd_target[i].conj() * odd_target[j];
        let w_even = even_target[i].conj() * even_target[j];
        if w_odd == ZERO && w_even == ZERO {
            continue;
        }
        let (sum_even, sum_odd) = fock_parity_sums(t.dyad.ket, t.dyad.bra, n_max);
        acc += t.dyad.coeff * (w_odd * sum_odd + w_even * sum_even);
    }
    out.odd = acc.re;
    out
}

/// `(Σ_{even n∈[2,n_max]} ⟨n|u⟩⟨v|n⟩, Σ_{odd n∈[1,n_max]} ⟨n|u⟩⟨v|n⟩)`.
fn fock_parity_sums(u: Complex64, v: Complex64, n_max: usize) -> (Complex64, Complex64) {
    let z = u * v.conj();
    let r = z.norm();
    if r == 0.0 || n_max == 0 {
        return (ZERO, ZERO);
    }
    let half_width = 15.0 * libm::sqrt(r) + 15.0;
    let lo = libm::floor(r - half_width).max(1.0) as usize;
    let hi = (libm::ceil(r + half_width) as usize).min(n_max);
    if lo > hi {
        return (ZERO, ZERO);
    }
    let ln_r = libm::log(r);
    let arg = z.arg();
    let mut log_mag =
        -0.5 * (u.norm_sqr() + v.norm_sqr()) + lo as f64 * ln_r - libm::lgamma(lo as f64 + 1.0);
    let mut even = ZERO;
    let mut odd = ZERO;
    for n in lo..=hi {
        if n > lo {
            log_mag += ln_r - libm::log(n as f64);
        }
        if log_mag > -745.0 {
            let w = Complex64::from_polar(libm::exp(log_mag), n as f64 * arg);
            if n % 2 == 0 {
                even += w;
            } else {
                odd += w;
            }
        }
    }
    (even, odd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::state::parity_gate_state;
    use crate::noise::NoiseSample;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn plus() -> QubitAmplitudes {
        QubitAmplitudes::new(Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(FRAC_1_SQRT_2, 0.0)).unwrap()
    }

    #[test]
    fn vacuum_probability_for_trivial_branch() {
        let zero = QubitAmplitudes::zero();
        let (alpha, theta) = (5.0, 0.3);
        let s = parity_gate_state(&zero, &zero, alpha, theta, &NoiseSample::ZERO);
        let expected = libm::exp(-2.0 * alpha * alpha * (1.0 - libm::cos(theta)));
        assert!((photon_count_prob(&s, 0) - expected).abs() < 1e-14);
        let (cond, _) = conditional_ab_state(&s, 3).unwrap();
        assert!((cond.0[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn no_phase_means_vacuum() {
        let s = parity_gate_state(&plus(), &plus(), 50.0, 0.0, &NoiseSample::ZERO);
        assert!((photon_count_prob(&s, 0) - 1.0).abs() < 1e-14);
        assert_eq!(photon_count_prob(&s, 1), 0.0);
        assert!(matches!(conditional_ab_state(&s, 1), Err(Error::Unconditionable { .. })));
    }

    #[test]
    fn target_sign_flips_with_parity() {
        let (qa, qb) = (plus(), plus());
        let odd = parity_target(&qa, &qb, 1).unwrap();
        let even = parity_target(&qa, &qb, 2).unwrap();
        assert_eq!(odd[3], even[3]);
        assert_eq!(odd[0], -even[0]);
        assert_eq!(odd[1], ZERO);
        assert!(matches!(
            parity_target(&QubitAmplitudes::zero(), &QubitAmplitudes::zero(), 0),
            Err(Error::UndefinedTarget { n: 0 })
        ));
    }

    #[test]
    fn pure_target_has_unit_overlap() {
        let (qa, qb) = (plus(), plus());
        let psi = parity_target(&qa, &qb, 0).unwrap();
        let mut m = AbMatrix::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = psi[i] * psi[j].conj();
            }
        }
        assert!((success_overlap(&m, &qa, &qb, 0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn even_branch_dominates_at_vacuum_count() {
        // zero noise, θ|α| = 2: the odd amplitudes reach vacuum with weight e^{-4}
        let (qa, qb) = (plus(), plus());
        let (alpha, theta) = (200.0, 0.01);
        let s = parity_gate_state(&qa, &qb, alpha, theta, &NoiseSample::ZERO);
        let (cond, _) = conditional_ab_state(&s, 0).unwrap();
        let even = success_overlap(&cond, &qa, &qb, 0).unwrap();
        let p11 = cond.0[3][3].re;
        let p00 = cond.0[0][0].re;
        let odd_leak = 4.0 * alpha * alpha * libm::pow(libm::sin(theta / 2.0), 2.0);
        assert!((p11 / cond.0[2][2].re - libm::exp(-odd_leak)).abs() < 1e-12);
        assert!((p00 / cond.0[1][1].re - libm::exp(-odd_leak)).abs() < 1e-12);
        assert!(even > 0.9);
    }
}
