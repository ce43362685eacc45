//! n-qubit Pauli operators in symplectic bit representation.

use crate::{Result, StabilizerError};

/// Non-identity single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PauliKind {
    X,
    Y,
    Z,
}

/// P = i^phase X^x Z^z on up to 64 qubits, with Y = i X Z per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    /// Power of i modulo 4.
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 64);
        Self {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    /// Build from bit masks with explicit phase power of i.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: u8) -> Self {
        assert!(n <= 64);
        let keep = mask_n(n);
        Self {
            n,
            x: x & keep,
            z: z & keep,
            phase: phase & 3,
        }
    }

    /// Parse a label like "XIZY": qubit 0 is the first character.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.len();
        if n > 64 {
            return Err(StabilizerError::InvalidArgument(
                "more than 64 qubits".into(),
            ));
        }
        let mut x = 0u64;
        let mut z = 0u64;
        let mut phase = 0u8;
        for (i, ch) in label.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => x |= 1 << i,
                'Z' => z |= 1 << i,
                'Y' => {
                    x |= 1 << i;
                    z |= 1 << i;
                    phase = (phase + 1) & 3;
                }
                other => {
                    return Err(StabilizerError::InvalidArgument(format!(
                        "unknown Pauli label '{other}'"
                    )))
                }
            }
        }
        Ok(Self { n, x, z, phase })
    }

    /// Single-qubit Pauli at position q.
    pub fn single(n: usize, q: usize, kind: PauliKind) -> Self {
        let bit = 1u64 << q;
        match kind {
            PauliKind::X => Self::from_masks(n, bit, 0, 0),
            PauliKind::Z => Self::from_masks(n, 0, bit, 0),
            PauliKind::Y => Self::from_masks(n, bit, bit, 1),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    /// Phase as a power of i modulo 4.
    pub fn phase_power(&self) -> u8 {
        self.phase
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        sym_parity(self.x & other.z) == sym_parity(self.z & other.x)
    }

    pub fn anticommutes_with(&self, other: &PauliString) -> bool {
        !self.commutes_with(other)
    }

    /// Group product. X^a Z^b · X^c Z^d = (-1)^{b·c} X^{a^c} Z^{b^d}.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.n, other.n, "qubit counts differ");
        let sign_flips = sym_parity(self.z & other.x);
        PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * sign_flips as u8) & 3,
        }
    }

    /// Per-qubit label, ignoring the global phase.
    pub fn label(&self) -> String {
        (0..self.n)
            .map(|i| match ((self.x >> i) & 1, (self.z >> i) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            })
            .collect()
    }
}

impl std::ops::Mul for PauliString {
    type Output = PauliString;
    fn mul(self, rhs: PauliString) -> PauliString {
        PauliString::mul(&self, &rhs)
    }
}

#[inline]
pub(crate) fn sym_parity(mask: u64) -> bool {
    mask.count_ones() & 1 == 1
}

#[inline]
pub(crate) fn mask_n(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
