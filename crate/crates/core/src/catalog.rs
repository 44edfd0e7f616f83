//! Named benchmark states, stored as bra-ket text.

use crate::braket;
use crate::error::Result;
use crate::state::QubitState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NamedState {
    pub key: &'static str,
    pub label: &'static str,
    pub text: &'static str,
    /// `false` for amplitude vectors kept exactly as written even though their norm is not 1.
    pub normalized: bool,
}

impl NamedState {
    /// Builds the state. Entries with `normalized == false` bypass the norm check.
    pub fn state(&self) -> Result<QubitState> {
        if self.normalized {
            braket::parse_state(self.text)
        } else {
            let (n, amps) = braket::evaluate(self.text)?;
            Ok(QubitState::unchecked(n, amps))
        }
    }
}

const fn unit(key: &'static str, label: &'static str, text: &'static str) -> NamedState {
    NamedState {
        key,
        label,
        text,
        normalized: true,
    }
}

pub const BELL: NamedState = unit("bell", "Bell", "(|00> + |11>)/sqrt(2)");
pub const GHZ3: NamedState = unit("ghz3", "GHZ3", "(|000> + |111>)/sqrt(2)");
pub const W3: NamedState = unit("w3", "W3", "(|001> + |010> + |100>)/sqrt(3)");
pub const ZERO_BELL: NamedState = unit("zero-bell", "|0>(x)Bell", "(|000> + |011>)/sqrt(2)");
pub const PLUS_BELL: NamedState = unit("plus-bell", "|+>(x)Bell", "(|000> + |011> + |100> + |111>)/2");
pub const GHZ4: NamedState = unit("ghz4", "GHZ4", "(|0000> + |1111>)/sqrt(2)");
pub const W0: NamedState = unit("w0", "W0", "1/2*(|1000> + |0100> + |0010> + |0001>)");
pub const W1: NamedState = unit("w1", "W1", "1/2*(|0111> + |1011> + |1101> + |1110>)");
pub const PHI1: NamedState = unit(
    "phi1",
    "Phi1",
    "1/sqrt(6)*(sqrt(2)|1111> + |1000> + |0100> + |0010> + |0001>)",
);
pub const PHI2: NamedState = unit(
    "phi2",
    "Phi2",
    "1/sqrt(40)*(3|0000> + 3|1111> - |0011> - |1100> + 3|0101> + 3|1010> - |0110> - |1001>)",
);
/// The `Phi2` amplitudes with prefactor `1/sqrt(2 sqrt(10))`; squared norm `2 sqrt(10)`.
pub const PHI2_PRINTED: NamedState = NamedState {
    key: "phi2-printed",
    label: "Phi2 (printed prefactor)",
    text: "1/sqrt(2*sqrt(10))*(3|0000> + 3|1111> - |0011> - |1100> + 3|0101> + 3|1010> - |0110> - |1001>)",
    normalized: false,
};

pub const ALL: [NamedState; 11] = [
    BELL, GHZ3, W3, ZERO_BELL, PLUS_BELL, GHZ4, W0, W1, PHI1, PHI2, PHI2_PRINTED,
];

pub fn lookup(key: &str) -> Option<NamedState> {
    ALL.iter().copied().find(|s| s.key == key)
}
