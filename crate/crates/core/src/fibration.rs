//! Base-space coordinates of the Hopf-type maps and the entanglement measure E.
//!
//! Everything is computed from quadratic forms of the pair `(u1, u2)`:
//! `P = u2·conj(u1)`, `delta = |u1|² − |u2|²`, `comps = 2·P`. No division or
//! stereographic projection is performed, so `u2 = 0` (the point at infinity)
//! needs no special case.

use num_complex::Complex64;
use serde::Serialize;

use crate::cd::CdElement;
use crate::error::{Error, Result};
use crate::state::{encode_pair_with, sedenion_quaternions, PairEncoding, QubitState, SedenionScheme};

/// Values this close outside `[0, 1]` are snapped onto the interval.
pub const E_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseCoordinates {
    pub n: usize,
    /// `comps[0] = 2 Re P`, `comps[k] = 2 × (i_k coefficient of P)`.
    pub comps: Vec<f64>,
    pub delta: f64,
    /// `1 − delta² − comps[0]² − comps[1]²`
    pub e_complement: f64,
    /// `Σ_{k≥2} comps[k]²`
    pub e_sum: f64,
    /// `4(|u1|²|u2|² − |P|²)`; zero whenever the algebra is a division algebra.
    pub norm_defect: f64,
}

impl BaseCoordinates {
    pub fn from_pair(pair: &PairEncoding) -> Self {
        let n = pair.level() as usize;
        let p = pair.u2 * pair.u1.conj();
        let comps: Vec<f64> = p.coeffs().iter().map(|c| 2.0 * c).collect();
        let (n1, n2) = (pair.u1.norm_sq(), pair.u2.norm_sq());
        let delta = n1 - n2;
        let e_complement = 1.0 - delta * delta - comps[0] * comps[0] - comps[1] * comps[1];
        let e_sum = comps.iter().skip(2).map(|c| c * c).sum();
        let norm_defect = 4.0 * (n1 * n2 - p.norm_sq());
        Self {
            n,
            comps,
            delta,
            e_complement,
            e_sum,
            norm_defect,
        }
    }

    /// `delta² + Σ comps² − 1`; zero for unit states when `n ≤ 3`.
    pub fn sphere_residual(&self) -> f64 {
        self.delta * self.delta + self.comps.iter().map(|c| c * c).sum::<f64>() - 1.0
    }

    /// Coordinates in the usual `X_1, X_2, …` numbering.
    ///
    /// Two qubits: `(delta, comps…)`. Three and four qubits: `(comps…, delta)`,
    /// where the higher `comps[k]` may differ in sign from a `Re[i_k(·)]` reading;
    /// all squares agree. One qubit: the Bloch vector `(x, y, z)`.
    pub fn numbered(&self) -> Vec<f64> {
        if self.n == 2 {
            std::iter::once(self.delta).chain(self.comps.iter().copied()).collect()
        } else {
            self.comps.iter().copied().chain(std::iter::once(self.delta)).collect()
        }
    }

    /// `(comps[0], comps[1], delta)`, i.e. `(X1, X2, X17)` for four qubits.
    pub fn ball(&self) -> [f64; 3] {
        [self.comps[0], self.comps[1], self.delta]
    }

    pub fn ball_radius_sq(&self) -> f64 {
        self.ball().iter().map(|x| x * x).sum()
    }

    pub fn is_mes(&self, tol: f64) -> bool {
        self.ball().iter().all(|x| x.abs() < tol)
    }
}

pub fn base_coordinates(state: &QubitState) -> BaseCoordinates {
    base_coordinates_with(state, SedenionScheme::default())
}

pub fn base_coordinates_with(state: &QubitState, scheme: SedenionScheme) -> BaseCoordinates {
    BaseCoordinates::from_pair(&encode_pair_with(state, scheme))
}

/// The two expressions for E plus their gap, as reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EMeasure {
    pub e_complement: f64,
    pub e_sum: f64,
    pub norm_defect: f64,
}

impl EMeasure {
    pub fn from_coordinates(c: &BaseCoordinates) -> Self {
        Self {
            e_complement: snap_unit(c.e_complement),
            e_sum: snap_unit(c.e_sum),
            norm_defect: c.norm_defect,
        }
    }
}

/// Removes rounding noise at the ends of `[0, 1]` without hiding real excursions.
pub fn snap_unit(x: f64) -> f64 {
    if x < 0.0 && x > -E_SNAP {
        0.0
    } else if x > 1.0 && x < 1.0 + E_SNAP {
        1.0
    } else {
        x
    }
}

fn require(op: &'static str, n: usize, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported { op, n })
    }
}

pub fn e_measure(state: &QubitState) -> Result<EMeasure> {
    e_measure_with(state, SedenionScheme::default())
}

pub fn e_measure_with(state: &QubitState, scheme: SedenionScheme) -> Result<EMeasure> {
    require("e_measure", state.n(), (2..=4).contains(&state.n()))?;
    Ok(EMeasure::from_coordinates(&base_coordinates_with(state, scheme)))
}

/// `(X1, X2, X17)` of a four-qubit state; separable states sit on the unit sphere.
pub fn ball_coordinates(state: &QubitState) -> Result<[f64; 3]> {
    require("ball_coordinates", state.n(), state.n() == 4)?;
    Ok(base_coordinates(state).ball())
}

pub fn is_mes(state: &QubitState, tol: f64) -> Result<bool> {
    require("is_mes", state.n(), state.n() == 4)?;
    Ok(base_coordinates(state).is_mes(tol))
}

/// Numerator and denominator of `h1 = u1·u2⁻¹` in the explicit component form.
///
/// `denominator == 0` is the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfQuotient {
    pub numerator: CdElement,
    pub denominator: f64,
}

/// Explicit quotient pieces, assembled block by block:
///
/// * 2 qubits: `(conj(a00) a10 + conj(a01) a11) + (a00 a11 − a01 a10) i2` over `|q2|²`.
/// * 3 qubits: complex `K1..K4` in blocks `1, i2, i4, i6` over `Σ|a1jk|²`.
/// * 4 qubits: quaternions `C1..C4` in blocks `1, i4, i8, i12` over `Σ|q5..q8|²`.
pub fn hopf_quotient(state: &QubitState) -> Result<HopfQuotient> {
    hopf_quotient_with(state, SedenionScheme::default())
}

pub fn hopf_quotient_with(state: &QubitState, scheme: SedenionScheme) -> Result<HopfQuotient> {
    let n = state.n();
    require("hopf_quotient", n, (2..=4).contains(&n))?;
    let a = state.amps();
    let half = a.len() / 2;
    let denominator = a[half..].iter().map(|z| z.norm_sqr()).sum();
    let numerator = match n {
        2 => complex_blocks(&[
            a[0].conj() * a[2] + a[1].conj() * a[3],
            a[0] * a[3] - a[1] * a[2],
        ]),
        3 => {
            let [a000, a001, a010, a011, a100, a101, a110, a111] =
                <[Complex64; 8]>::try_from(a).expect("8 amplitudes");
            let k1 = a000 * a100.conj() + a001 * a101.conj() + a110.conj() * a010 + a111.conj() * a011;
            let k2 = a001 * a100 - a000 * a101 + (a110 * a011 - a111 * a010).conj();
            let k3 = a010 * a100 - a110 * a000 + (a111 * a001 - a011 * a101).conj();
            let k4 = a110 * a001 - a010 * a101 + (a111 * a000 - a011 * a100).conj();
            complex_blocks(&[k1, k2, k3, k4])
        }
        _ => {
            let [q1, q2, q3, q4, q5, q6, q7, q8] = sedenion_quaternions(state, scheme)?;
            let c1 = q1 * q5.conj() + q6.conj() * q2 + q7.conj() * q3 + q4 * q8.conj();
            let c2 = q2 * q5 - q6 * q1 + (q4 * q7 - q8 * q3).conj();
            let c3 = q3 * q5 - q7 * q1 + (q3 * q8 - q6 * q4).conj();
            let c4 = q2 * q7 - q6 * q3 + (q8 * q1 - q4 * q5).conj();
            let lo = CdElement::from_pair(&c1, &c2)?;
            let hi = CdElement::from_pair(&c3, &c4)?;
            CdElement::from_pair(&lo, &hi)?
        }
    };
    Ok(HopfQuotient {
        numerator,
        denominator,
    })
}

fn complex_blocks(blocks: &[Complex64]) -> CdElement {
    let coeffs: Vec<f64> = blocks.iter().flat_map(|z| [z.re, z.im]).collect();
    let level = coeffs.len().ilog2() as u8;
    CdElement::new(level, &coeffs).expect("power-of-two block count")
}

/// `u1·u2⁻¹` scaled by `|u2|²`, i.e. `u1·conj(u2)`, straight from the algebra.
pub fn quotient_from_algebra(state: &QubitState, scheme: SedenionScheme) -> CdElement {
    let p = encode_pair_with(state, scheme);
    p.u1 * p.u2.conj()
}

/// Per-coordinate signs relating the explicit numerator to `u1·conj(u2)`.
///
/// Two qubits: the explicit numerator is the conjugate of `u1·conj(u2)`.
/// Three qubits: it agrees except that the `K4` block enters with the opposite sign.
/// Four qubits: no fixed pattern exists; `None`.
pub fn quotient_sign_pattern(n: usize) -> Option<Vec<f64>> {
    match n {
        2 => Some(vec![1.0, -1.0, -1.0, -1.0]),
        3 => Some(vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0]),
        _ => None,
    }
}

/// Largest coordinate gap between the explicit numerator and the algebraic
/// quotient after applying the sign pattern (or none, for four qubits).
pub fn quotient_deviation(state: &QubitState, scheme: SedenionScheme) -> Result<f64> {
    let q = hopf_quotient_with(state, scheme)?;
    let reference = quotient_from_algebra(state, scheme);
    let signs = quotient_sign_pattern(state.n()).unwrap_or_else(|| vec![1.0; reference.dim()]);
    Ok(q
        .numerator
        .coeffs()
        .iter()
        .zip(reference.coeffs())
        .zip(signs)
        .map(|((x, r), s)| (x - s * r).abs())
        .fold(0.0, f64::max))
}
