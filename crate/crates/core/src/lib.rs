//! Cayley-Dickson algebras and the Hopf fibration picture of entanglement for
//! pure states of one to four qubits.
//!
//! A state on `n` qubits is split into two halves `u1 = ψ(0…)`, `u2 = ψ(1…)`,
//! each packed into a complex, quaternion or octonion value of level `n - 1`.
//! The point `P = u2·conj(u1)` then gives base-space coordinates whose
//! complement `E = 1 - δ² - c0² - c1²` tracks entanglement of the first qubit
//! with the rest.

pub mod braket;
pub mod catalog;
pub mod cd;
pub mod error;
pub mod fibration;
pub mod oracle;
pub mod report;
pub mod state;

pub use braket::{format_state, parse_state, parse_state_with};
pub use cd::CdElement;
pub use error::{Error, ParseError, Result, SourcePos};
pub use fibration::{base_coordinates, e_measure, BaseCoordinates, EMeasure, HopfQuotient};
pub use num_complex::Complex64;
pub use oracle::ThreeQubitClass;
pub use report::{ConformanceRow, EntanglementReport};
pub use state::{encode_pair, PairEncoding, QubitState, SedenionScheme};
