//! Qubit–probe density operators as finite sums of labeled coherent-state dyads.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::qubit::QubitAmplitudes;
use crate::noise::NoiseSample;

/// `coeff · |ket⟩⟨bra|` for probe coherent states `|ket⟩`, `|bra⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentDyad {
    pub coeff: Complex64,
    pub ket: Complex64,
    pub bra: Complex64,
}

impl CoherentDyad {
    /// `coeff · |amp⟩⟨amp|`
    pub fn projector(coeff: Complex64, amp: Complex64) -> Self {
        Self {
            coeff,
            ket: amp,
            bra: amp,
        }
    }

    /// `tr(coeff |ket⟩⟨bra|) = coeff · ⟨bra|ket⟩`
    pub fn trace(&self) -> Complex64 {
        self.coeff * coherent_overlap(self.bra, self.ket)
    }

    /// `⟨n| coeff |ket⟩⟨bra| |n⟩`
    pub fn fock_element(&self, n: usize) -> Complex64 {
        self.coeff * fock_weight(self.ket, self.bra, n)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            coeff: self.coeff.conj(),
            ket: self.bra,
            bra: self.ket,
        }
    }

    fn map_amplitudes(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            coeff: self.coeff,
            ket: f(self.ket),
            bra: f(self.bra),
        }
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.coeff - other.coeff).norm() <= tol
            && (self.ket - other.ket).norm() <= tol
            && (self.bra - other.bra).norm() <= tol
    }
}

/// `⟨v|u⟩ = exp(−|u|²/2 − |v|²/2 + v̄u)`
pub fn coherent_overlap(v: Complex64, u: Complex64) -> Complex64 {
    (Complex64::new(-0.5 * (u.norm_sqr() + v.norm_sqr()), 0.0) + v.conj() * u).exp()
}

/// `⟨n|u⟩⟨v|n⟩ = e^{−(|u|²+|v|²)/2} (u v̄)ⁿ / n!`, evaluated in log space.
pub fn fock_weight(u: Complex64, v: Complex64, n: usize) -> Complex64 {
    let base = -0.5 * (u.norm_sqr() + v.norm_sqr());
    let z = u * v.conj();
    if n == 0 {
        return Complex64::new(libm::exp(base), 0.0);
    }
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let nf = n as f64;
    let log_mag = base + nf * libm::log(r) - libm::lgamma(nf + 1.0);
    Complex64::from_polar(libm::exp(log_mag), nf * z.arg())
}

/// Qubit label `|ket⟩⟨bra|` paired with a probe dyad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitTerm {
    pub ket: u8,
    pub bra: u8,
    pub dyad: CoherentDyad,
}

/// Labels in the order `|0⟩⟨0|`, `|1⟩⟨1|`, `|1⟩⟨0|`, `|0⟩⟨1|`.
const LABELS: [(u8, u8); 4] = [(0, 0), (1, 1), (1, 0), (0, 1)];

/// Coefficient of `|k⟩⟨b|` in `|ψ⟩⟨ψ|` with the coherence riding on the
/// signal noise `e^{iξ(k−b)}`.
fn qubit_coefficient(q: &QubitAmplitudes, k: u8, b: u8, xi: f64) -> Complex64 {
    let phase = xi * (k as f64 - b as f64);
    q.amplitude(k) * q.amplitude(b).conj() * Complex64::from_polar(1.0, phase)
}

/// Probe phase picked up under qubit label `|k⟩⟨b|`: `ξ_P` on `|0⟩⟨0|`,
/// `ξ_P + θ` on `|1⟩⟨1|`, and the half phase `ξ_P + θ/2` on both coherences.
fn xpm_phase(k: u8, b: u8, theta: f64, xi_p: f64) -> f64 {
    xi_p + 0.5 * theta * (k as f64 + b as f64)
}

/// One qubit entangled with the probe after a single slow-response XPM cell.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitProbeState {
    pub terms: Vec<QubitTerm>,
}

/// Noise-conditional density operator of one qubit and a probe that entered
/// in the coherent state `|probe⟩`. Terms with zero coefficient are dropped.
pub fn single_xpm_density(
    qubit: &QubitAmplitudes,
    probe: Complex64,
    theta: f64,
    xi_s: f64,
    xi_p: f64,
) -> QubitProbeState {
    let terms = LABELS
        .iter()
        .filter_map(|&(k, b)| {
            let coeff = qubit_coefficient(qubit, k, b, xi_s);
            (coeff != Complex64::new(0.0, 0.0)).then(|| QubitTerm {
                ket: k,
                bra: b,
                dyad: CoherentDyad::projector(
                    coeff,
                    probe * Complex64::from_polar(1.0, xpm_phase(k, b, theta, xi_p)),
                ),
            })
        })
        .collect();
    QubitProbeState { terms }
}

impl QubitProbeState {
    /// Passes the probe through a second XPM cell driven by `qubit`. Every
    /// probe dyad is rotated on both sides by the second cell's phase.
    pub fn interact(&self, qubit: &QubitAmplitudes, theta: f64, xi_s: f64, xi_p: f64) -> HybridState {
        let mut terms = Vec::with_capacity(self.terms.len() * 4);
        for first in &self.terms {
            for &(k, b) in &LABELS {
                let coeff = qubit_coefficient(qubit, k, b, xi_s);
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rot = Complex64::from_polar(1.0, xpm_phase(k, b, theta, xi_p));
                let mut dyad = first.dyad.map_amplitudes(|a| a * rot);
                dyad.coeff *= coeff;
                terms.push(HybridTerm {
                    a_ket: first.ket,
                    a_bra: first.bra,
                    b_ket: k,
                    b_bra: b,
                    dyad,
                });
            }
        }
        HybridState { terms }
    }

    pub fn trace(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.ket == t.bra)
            .map(|t| t.dyad.trace())
            .sum()
    }
}

/// Alice ⊗ Bob label `|a_ket b_ket⟩⟨a_bra b_bra|` paired with a probe dyad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridTerm {
    pub a_ket: u8,
    pub a_bra: u8,
    pub b_ket: u8,
    pub b_bra: u8,
    pub dyad: CoherentDyad,
}

impl HybridTerm {
    /// Two-qubit basis index `2a + b` of the ket label.
    pub fn ket_index(&self) -> usize {
        2 * self.a_ket as usize + self.b_ket as usize
    }

    pub fn bra_index(&self) -> usize {
        2 * self.a_bra as usize + self.b_bra as usize
    }

    pub fn is_diagonal(&self) -> bool {
        self.a_ket == self.a_bra && self.b_ket == self.b_bra
    }

    pub fn adjoint(&self) -> Self {
        Self {
            a_ket: self.a_bra,
            a_bra: self.a_ket,
            b_ket: self.b_bra,
            b_bra: self.b_ket,
            dyad: self.dyad.adjoint(),
        }
    }
}

/// Alice–Bob–probe density operator, up to 16 labeled dyads.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    pub terms: Vec<HybridTerm>,
}

impl HybridState {
    pub fn trace(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.is_diagonal())
            .map(|t| t.dyad.trace())
            .sum()
    }

    /// Every term has an adjoint partner within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| {
            let adj = t.adjoint();
            self.terms.iter().any(|s| {
                s.a_ket == adj.a_ket
                    && s.a_bra == adj.a_bra
                    && s.b_ket == adj.b_ket
                    && s.b_bra == adj.b_bra
                    && s.dyad.approx_eq(&adj.dyad, tol)
            })
        })
    }

    /// Applies the `−θ` phase shifter and the `−α_P` displacement:
    /// each probe amplitude `w` becomes `w e^{−iθ} − α_P`.
    pub fn shift_and_displace(&self, alpha_p: f64, theta: f64) -> Self {
        let shift = Complex64::from_polar(1.0, -theta);
        let alpha = Complex64::new(alpha_p, 0.0);
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| HybridTerm {
                    dyad: t.dyad.map_amplitudes(|w| w * shift - alpha),
                    ..*t
                })
                .collect(),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|(s, o)| {
                s.a_ket == o.a_ket
                    && s.a_bra == o.a_bra
                    && s.b_ket == o.b_ket
                    && s.b_bra == o.b_bra
                    && s.dyad.approx_eq(&o.dyad, tol)
            })
    }
}

/// Probe phase offset after the `−θ` shifter, in units of `θ/2`, for each
/// Alice label (rows) and Bob label (columns), both in [`LABELS`] order.
const BRANCH_OFFSETS: [[i8; 4]; 4] = [
    // Alice |0⟩⟨0|
    [-2, 0, -1, -1],
    // Alice |1⟩⟨1|
    [0, 2, 1, 1],
    // Alice |1⟩⟨0|
    [-1, 1, 0, 0],
    // Alice |0⟩⟨1|
    [-1, 1, 0, 0],
];

/// Full parity-gate output for one noise draw, already shifted by `−θ` and
/// displaced by `−α_P`. Built directly from the branch table; compare with
/// [`single_xpm_density`] followed by [`QubitProbeState::interact`] and
/// [`HybridState::shift_and_displace`].
pub fn parity_gate_state(
    qa: &QubitAmplitudes,
    qb: &QubitAmplitudes,
    alpha_p: f64,
    theta: f64,
    noise: &NoiseSample,
) -> HybridState {
    let mut terms = Vec::with_capacity(16);
    for (row, &(ak, ab)) in LABELS.iter().enumerate() {
        let ca = qubit_coefficient(qa, ak, ab, noise.xi_a);
        if ca == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (col, &(bk, bb)) in LABELS.iter().enumerate() {
            let cb = qubit_coefficient(qb, bk, bb, noise.xi_b);
            if cb == Complex64::new(0.0, 0.0) {
                continue;
            }
            let gamma = noise.xi_p + 0.5 * theta * BRANCH_OFFSETS[row][col] as f64;
            let amp = Complex64::new(alpha_p, 0.0) * (Complex64::from_polar(1.0, gamma) - 1.0);
            terms.push(HybridTerm {
                a_ket: ak,
                a_bra: ab,
                b_ket: bk,
                b_bra: bb,
                dyad: CoherentDyad::projector(ca * cb, amp),
            });
        }
    }
    HybridState { terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_qubit_leaves_single_term() {
        let s = single_xpm_density(&QubitAmplitudes::zero(), c(5.0, 0.0), 0.3, 0.1, 0.2);
        assert_eq!(s.terms.len(), 1);
        let t = s.terms[0];
        assert_eq!((t.ket, t.bra), (0, 0));
        assert_eq!(t.dyad.coeff, c(1.0, 0.0));
        assert!((t.dyad.ket - Complex64::from_polar(5.0, 0.2)).norm() < 1e-15);
    }

    #[test]
    fn photon_qubit_shifts_by_theta() {
        let s = single_xpm_density(&QubitAmplitudes::one(), c(5.0, 0.0), 0.3, 0.1, 0.2);
        assert_eq!(s.terms.len(), 1);
        assert_eq!((s.terms[0].ket, s.terms[0].bra), (1, 1));
        assert!((s.terms[0].dyad.ket - Complex64::from_polar(5.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn coherences_ride_at_half_phase() {
        let q = QubitAmplitudes::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
        let s = single_xpm_density(&q, c(1.0, 0.0), 0.1, 0.0, 0.0);
        assert_eq!(s.terms.len(), 4);
        for t in s.terms.iter().filter(|t| t.ket != t.bra) {
            assert!((t.dyad.ket.arg() - 0.05).abs() < 1e-15);
            assert_eq!(t.dyad.ket, t.dyad.bra);
        }
        assert!((s.trace() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fock_weight_is_poisson_for_projectors() {
        let beta = c(1.2, -0.7);
        let mean = beta.norm_sqr();
        let mut p = libm::exp(-mean);
        for n in 0..30 {
            let w = fock_weight(beta, beta, n);
            assert!((w.re - p).abs() < 1e-15 && w.im.abs() < 1e-15);
            p *= mean / (n as f64 + 1.0);
        }
    }

    #[test]
    fn trivial_gate_branch() {
        let zero = QubitAmplitudes::zero();
        let s = parity_gate_state(&zero, &zero, 10.0, 0.3, &NoiseSample::ZERO);
        assert_eq!(s.terms.len(), 1);
        let expected = c(10.0, 0.0) * (Complex64::from_polar(1.0, -0.3) - 1.0);
        assert!((s.terms[0].dyad.ket - expected).norm() < 1e-14);
    }

    #[test]
    fn adjoint_is_involution() {
        let d = CoherentDyad {
            coeff: c(0.3, 0.2),
            ket: c(1.0, 2.0),
            bra: c(-0.5, 0.1),
        };
        assert_eq!(d.adjoint().adjoint(), d);
        assert!((d.adjoint().trace() - d.trace().conj()).norm() < 1e-15);
    }
}
