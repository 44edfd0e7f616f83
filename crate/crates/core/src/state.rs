//! Pure states of 1-4 qubits and their encoding as a pair of Cayley-Dickson elements.
//!
//! Amplitudes are indexed by bitstring with qubit A as the most significant bit:
//! `|ABCD⟩` lives at index `8A + 4B + 2C + D`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cd::CdElement;
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 4;

/// Allowed deviation of `Σ|a|²` from 1 when the caller does not ask for rescaling.
pub const NORM_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct QubitState {
    n: usize,
    amps: Vec<Complex64>,
}

impl QubitState {
    /// Validates `amps` as an `n`-qubit state, rescaling to unit norm when `normalize` is set.
    pub fn new(n: usize, amps: Vec<Complex64>, normalize: bool) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n) {
            return Err(Error::QubitCount(n));
        }
        let expected = 1usize << n;
        if amps.len() != expected {
            return Err(Error::Shape {
                n,
                expected,
                got: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("amplitude"));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq == 0.0 {
            return Err(Error::Degenerate);
        }
        if normalize {
            let s = 1.0 / norm_sq.sqrt();
            let amps = amps.into_iter().map(|a| a * s).collect();
            return Ok(Self { n, amps });
        }
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { n, amps })
    }

    /// Computational basis state `|bits⟩`, e.g. `basis("0101")`.
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        if !(1..=MAX_QUBITS).contains(&n) {
            return Err(Error::QubitCount(n));
        }
        let index = usize::from_str_radix(bits, 2).map_err(|_| Error::Shape {
            n,
            expected: 1 << n,
            got: 0,
        })?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(n, amps, false)
    }

    /// Skips validation; used for auditing amplitude vectors that are not normalized.
    pub(crate) fn unchecked(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        Self { n, amps }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker product; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &QubitState) -> Result<QubitState> {
        let n = self.n + other.n;
        if n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        QubitState::new(n, amps, false)
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> QubitState {
        let ph = Complex64::from_polar(1.0, theta);
        QubitState {
            n: self.n,
            amps: self.amps.iter().map(|a| a * ph).collect(),
        }
    }

    /// Applies a 2×2 unitary `u` (row-major) to one qubit.
    pub fn apply_single_qubit(&self, qubit: usize, u: [[Complex64; 2]; 2]) -> Result<QubitState> {
        check_qubit(qubit, self.n)?;
        let mask = 1usize << (self.n - 1 - qubit);
        let mut amps = self.amps.clone();
        for i in (0..self.dim()).filter(|i| i & mask == 0) {
            let a0 = self.amps[i];
            let a1 = self.amps[i | mask];
            amps[i] = u[0][0] * a0 + u[0][1] * a1;
            amps[i | mask] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(QubitState { n: self.n, amps })
    }

    pub fn to_json(&self) -> String {
        let file = StateFile {
            n: self.n,
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("state serialization cannot fail")
    }

    pub fn from_json(text: &str, normalize: bool) -> Result<QubitState> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::StateFile(e.to_string()))?;
        let amps = file
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        QubitState::new(file.n, amps, normalize)
    }
}

/// On-disk state format: `{"n": 2, "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

fn check_qubit(index: usize, n: usize) -> Result<()> {
    if index >= n {
        Err(Error::QubitIndex { index, n })
    } else {
        Ok(())
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = [false; MAX_QUBITS];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Reorders qubits so that original qubit `perm[j]` ends up at position `j`.
pub fn permute_qubits(state: &QubitState, perm: &[usize]) -> Result<QubitState> {
    let n = state.n;
    check_permutation(perm, n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); state.dim()];
    for (new_index, slot) in amps.iter_mut().enumerate() {
        let mut old_index = 0;
        for (j, &src) in perm.iter().enumerate() {
            let bit = (new_index >> (n - 1 - j)) & 1;
            old_index |= bit << (n - 1 - src);
        }
        *slot = state.amps[old_index];
    }
    Ok(QubitState { n, amps })
}

/// The permutation equivalent to applying `first` and then `second`:
/// `permute(second, permute(first, s)) == permute(compose(second, first), s)`.
pub fn compose_permutations(second: &[usize], first: &[usize]) -> Vec<usize> {
    second.iter().map(|&j| first[j]).collect()
}

/// Permutation moving `qubit` into position A, keeping the others in order.
pub fn bring_to_front(n: usize, qubit: usize) -> Result<Vec<usize>> {
    check_qubit(qubit, n)?;
    Ok(std::iter::once(qubit)
        .chain((0..n).filter(|&q| q != qubit))
        .collect())
}

/// Haar-random `n`-qubit state, deterministic in `seed`.
pub fn random_state(n: usize, seed: u64) -> Result<QubitState> {
    random_state_at(n, seed, 0)
}

/// The `index`-th state of the stream keyed by `seed`.
///
/// Each index draws from its own ChaCha stream, so batches can be generated in
/// any order (or in parallel) and still agree sample for sample.
pub fn random_state_at(n: usize, seed: u64, index: u64) -> Result<QubitState> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCount(n));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    QubitState::new(n, amps, true)
}

/// How the 4-qubit amplitudes are packed into quaternions before the sedenion stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SedenionScheme {
    /// Conjugates the second slot of `q2, q3, q6, q7` (the quaternions whose
    /// B and C bits differ) in addition to the printed bars on `q4, q8`.
    /// Without it, one-vs-three product states with complex amplitudes do
    /// not land on the separable locus.
    #[default]
    PhaseConsistent,
    /// Plain `q_k = a_{..0} + a_{..1} i2` for all eight quaternions, bars on `q4, q8` only.
    AsPrinted,
}

/// A state packed as two elements `(u1, u2)` of the level-`n` algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairEncoding {
    pub u1: CdElement,
    pub u2: CdElement,
    pub scheme: SedenionScheme,
}

impl PairEncoding {
    pub fn level(&self) -> u8 {
        self.u1.level()
    }

    pub fn norm_sq(&self) -> f64 {
        self.u1.norm_sq() + self.u2.norm_sq()
    }

    /// Recovers the amplitude vector (exact inverse of [`encode_pair_with`]).
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let n = self.level() as usize;
        let mut out = Vec::with_capacity(1 << n);
        for u in [&self.u1, &self.u2] {
            match n {
                1 => out.push(to_complex(u)),
                2 => {
                    let (a, b) = unquat(u);
                    out.extend([a, b]);
                }
                3 => {
                    let (q1, q2) = u.halves().expect("octonion");
                    let (a0, a1) = unquat(&q1);
                    let (a2, a3) = unquat(&q2);
                    out.extend([a0, a1, a2, a3.conj()]);
                }
                _ => {
                    let (lo, hi) = u.halves().expect("sedenion");
                    let (qa, qb) = lo.halves().expect("octonion");
                    let (qc, qd) = hi.halves().expect("octonion");
                    let quats = [qa, qb, qc, qd.conj()];
                    for (k, q) in quats.iter().enumerate() {
                        let (a, b) = unquat(q);
                        // k = 1, 2 are the quaternions whose B and C bits differ
                        let flip = self.scheme == SedenionScheme::PhaseConsistent && matches!(k, 1 | 2);
                        out.extend([a, if flip { b.conj() } else { b }]);
                    }
                }
            }
        }
        out
    }
}

fn to_complex(x: &CdElement) -> Complex64 {
    Complex64::new(x.coeffs()[0], x.coeffs()[1])
}

fn unquat(q: &CdElement) -> (Complex64, Complex64) {
    let (a, b) = q.halves().expect("quaternion");
    (to_complex(&a), to_complex(&b))
}

fn cx(z: Complex64) -> CdElement {
    CdElement::from_complex(z)
}

fn quat(a: Complex64, b: Complex64) -> CdElement {
    CdElement::from_pair(&cx(a), &cx(b)).expect("complex pair")
}

fn pair(lo: CdElement, hi: CdElement) -> CdElement {
    CdElement::from_pair(&lo, &hi).expect("same-level pair")
}

/// The eight quaternions `q1..q8` of a 4-qubit state, before the bars on `q4, q8`.
pub fn sedenion_quaternions(state: &QubitState, scheme: SedenionScheme) -> Result<[CdElement; 8]> {
    if state.n != 4 {
        return Err(Error::Unsupported {
            op: "sedenion quaternions",
            n: state.n,
        });
    }
    let a = &state.amps;
    Ok(std::array::from_fn(|k| {
        let b = a[2 * k + 1];
        let b = match scheme {
            SedenionScheme::PhaseConsistent if matches!(k, 1 | 2 | 5 | 6) => b.conj(),
            _ => b,
        };
        quat(a[2 * k], b)
    }))
}

pub fn encode_pair(state: &QubitState) -> PairEncoding {
    encode_pair_with(state, SedenionScheme::default())
}

/// Packs a state as `(u1, u2)`: qubit A = 0 goes to `u1`, A = 1 to `u2`.
///
/// * 1 qubit: `u1 = a0`, `u2 = a1`.
/// * 2 qubits: `q1 = a00 + a01 i2`, `q2 = a10 + a11 i2`.
/// * 3 qubits: `q2 = a010 + conj(a011) i2`, `q4 = a110 + conj(a111) i2`,
///   `o1 = q1 + q2 i4`, `o2 = q3 + q4 i4`.
/// * 4 qubits: `o2 = q3 + conj(q4) i4`, `o4 = q7 + conj(q8) i4`,
///   `s1 = o1 + o2 i8`, `s2 = o3 + o4 i8`; see [`SedenionScheme`] for the quaternions.
pub fn encode_pair_with(state: &QubitState, scheme: SedenionScheme) -> PairEncoding {
    let a = &state.amps;
    let (u1, u2) = match state.n {
        1 => (cx(a[0]), cx(a[1])),
        2 => (quat(a[0], a[1]), quat(a[2], a[3])),
        3 => {
            let q1 = quat(a[0], a[1]);
            let q2 = quat(a[2], a[3].conj());
            let q3 = quat(a[4], a[5]);
            let q4 = quat(a[6], a[7].conj());
            (pair(q1, q2), pair(q3, q4))
        }
        4 => {
            let q = sedenion_quaternions(state, scheme).expect("4 qubits");
            let o1 = pair(q[0], q[1]);
            let o2 = pair(q[2], q[3].conj());
            let o3 = pair(q[4], q[5]);
            let o4 = pair(q[6], q[7].conj());
            (pair(o1, o2), pair(o3, o4))
        }
        _ => unreachable!("QubitState guarantees 1..=4 qubits"),
    };
    PairEncoding { u1, u2, scheme }
}
