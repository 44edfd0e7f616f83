//! Entanglement measures computed straight from amplitudes, with no reference
//! to the fibration. These serve as ground truth for the geometric measures.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{bring_to_front, permute_qubits, QubitState};

/// Default absolute tolerance for the minor-based separability tests.
pub const SEPARABILITY_TOL: f64 = 1e-9;

/// A single-qubit reduced density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    pub entries: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    pub fn trace(&self) -> f64 {
        (self.entries[0][0] + self.entries[1][1]).re
    }

    /// `ρ00 ρ11 − |ρ01|²` (real for a Hermitian matrix).
    pub fn det(&self) -> f64 {
        let e = &self.entries;
        e[0][0].re * e[1][1].re - e[0][1].norm_sqr()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let e = &self.entries;
        [
            e[0][0].im.abs(),
            e[1][1].im.abs(),
            (e[0][1] - e[1][0].conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let t = self.trace();
        let disc = (t * t - 4.0 * self.det()).max(0.0).sqrt();
        [(t - disc) / 2.0, (t + disc) / 2.0]
    }
}

fn require(op: &'static str, n: usize, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported { op, n })
    }
}

/// `ρ[r][c] = Σ_rest a(r, rest) · conj(a(c, rest))` for the kept qubit.
pub fn partial_trace_to_single(state: &QubitState, keep: usize) -> Result<DensityMatrix2> {
    let n = state.n();
    require("partial_trace_to_single", n, n >= 2)?;
    if keep >= n {
        return Err(Error::QubitIndex { index: keep, n });
    }
    let mask = 1usize << (n - 1 - keep);
    let a = state.amps();
    let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in (0..a.len()).filter(|i| i & mask == 0) {
        let pair = [a[i], a[i | mask]];
        for r in 0..2 {
            for c in 0..2 {
                rho[r][c] += pair[r] * pair[c].conj();
            }
        }
    }
    Ok(DensityMatrix2 { entries: rho })
}

/// Pure-state concurrence `2|a00 a11 − a01 a10|`.
pub fn concurrence(state: &QubitState) -> Result<f64> {
    require("concurrence", state.n(), state.n() == 2)?;
    let a = state.amps();
    Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm())
}

const EPS: [[f64; 2]; 2] = [[0.0, 1.0], [-1.0, 0.0]];

fn amp3(a: &[Complex64], i: usize, j: usize, k: usize) -> Complex64 {
    a[(i << 2) | (j << 1) | k]
}

/// The ε-contraction `½ ε^{il} ε^{jm} c_ij c_lm` with `c_kn = ½ ε^{il} ε^{jm} a_ijk a_lmn`.
///
/// Evaluates to `−Det/4`, where `Det` is Cayley's hyperdeterminant.
#[allow(clippy::needless_range_loop)]
pub fn epsilon_contraction(state: &QubitState) -> Result<Complex64> {
    require("epsilon_contraction", state.n(), state.n() == 3)?;
    let a = state.amps();
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (k, row) in c.iter_mut().enumerate() {
        for (n, cell) in row.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for l in 0..2 {
                    for j in 0..2 {
                        for m in 0..2 {
                            let e = EPS[i][l] * EPS[j][m];
                            if e != 0.0 {
                                acc += amp3(a, i, j, k) * amp3(a, l, m, n) * e;
                            }
                        }
                    }
                }
            }
            *cell = acc * 0.5;
        }
    }
    let mut det = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for l in 0..2 {
            for j in 0..2 {
                for m in 0..2 {
                    let e = EPS[i][l] * EPS[j][m];
                    if e != 0.0 {
                        det += c[i][j] * c[l][m] * e;
                    }
                }
            }
        }
    }
    Ok(det * 0.5)
}

/// Cayley's hyperdeterminant of the 2×2×2 amplitude tensor (|Det(GHZ)| = 1/4).
pub fn hyperdeterminant_222(state: &QubitState) -> Result<Complex64> {
    Ok(epsilon_contraction(state)? * -4.0)
}

/// `τ_ABC = 4 |Det|`.
pub fn three_tangle(state: &QubitState) -> Result<f64> {
    Ok(4.0 * hyperdeterminant_222(state)?.norm())
}

/// `(τ_A(BC), τ_B(CA), τ_C(AB))`, each `4 det ρ`.
pub fn two_tangles(state: &QubitState) -> Result<[f64; 3]> {
    require("two_tangles", state.n(), state.n() == 3)?;
    Ok([
        tau_one_rest(state, 0)?,
        tau_one_rest(state, 1)?,
        tau_one_rest(state, 2)?,
    ])
}

/// `4 det ρ_q` for the chosen qubit against the rest.
pub fn tau_one_rest(state: &QubitState, qubit: usize) -> Result<f64> {
    require("tau_one_rest", state.n(), (2..=4).contains(&state.n()))?;
    Ok(4.0 * partial_trace_to_single(state, qubit)?.det())
}

/// Largest `|a_0x a_1y − a_0y a_1x|` over all 2×2 minors of the `2 × 2^{n-1}`
/// matrix whose rows are indexed by `qubit`.
pub fn max_minor(state: &QubitState, qubit: usize) -> Result<f64> {
    require("max_minor", state.n(), (2..=4).contains(&state.n()))?;
    let s = permute_qubits(state, &bring_to_front(state.n(), qubit)?)?;
    let a = s.amps();
    let half = a.len() / 2;
    let (top, bottom) = a.split_at(half);
    let mut worst: f64 = 0.0;
    for x in 0..half {
        for y in x + 1..half {
            worst = worst.max((top[x] * bottom[y] - top[y] * bottom[x]).norm());
        }
    }
    Ok(worst)
}

/// True iff the state factors as (chosen qubit) ⊗ (rest): every minor below `tol`.
pub fn separable_one_rest(state: &QubitState, qubit: usize, tol: f64) -> Result<bool> {
    Ok(max_minor(state, qubit)? < tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThreeQubitClass {
    FullySeparable,
    BiSeparable,
    Entangled,
}

impl ThreeQubitClass {
    pub fn code(self) -> u8 {
        match self {
            ThreeQubitClass::FullySeparable => 0,
            ThreeQubitClass::BiSeparable => 1,
            ThreeQubitClass::Entangled => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ThreeQubitClass::FullySeparable => "fully-separable",
            ThreeQubitClass::BiSeparable => "bi-separable",
            ThreeQubitClass::Entangled => "entangled",
        }
    }
}

/// Tries every qubit as the split-off factor; the remaining pair decides
/// between bi-separable and fully separable.
pub fn classify_three(state: &QubitState, tol: f64) -> Result<ThreeQubitClass> {
    require("classify_three", state.n(), state.n() == 3)?;
    let mut split_found = false;
    for q in 0..3 {
        if !separable_one_rest(state, q, tol)? {
            continue;
        }
        split_found = true;
        let s = permute_qubits(state, &bring_to_front(3, q)?)?;
        let a = s.amps();
        let (top, bottom) = a.split_at(4);
        let top_norm: f64 = top.iter().map(|z| z.norm_sqr()).sum();
        let bottom_norm: f64 = bottom.iter().map(|z| z.norm_sqr()).sum();
        let row = if top_norm >= bottom_norm { top } else { bottom };
        let scale = top_norm.max(bottom_norm).sqrt();
        let r: Vec<Complex64> = row.iter().map(|z| z / scale).collect();
        if (r[0] * r[3] - r[1] * r[2]).norm() < tol {
            return Ok(ThreeQubitClass::FullySeparable);
        }
    }
    Ok(if split_found {
        ThreeQubitClass::BiSeparable
    } else {
        ThreeQubitClass::Entangled
    })
}
