//! Stabilizer codes, syndromes, the ideal decoder, and the minimum-weight
//! syndrome-class lookup.

use crate::pauli::{sym_parity, PauliString};
use crate::{Result, StabilizerError};

/// Logical action of an error relative to the syndrome-class representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum LogicalLabel {
    I,
    X,
    Y,
    Z,
}

impl LogicalLabel {
    pub fn from_bits(x_component: bool, z_component: bool) -> Self {
        match (x_component, z_component) {
            (false, false) => LogicalLabel::I,
            (true, false) => LogicalLabel::X,
            (false, true) => LogicalLabel::Z,
            (true, true) => LogicalLabel::Y,
        }
    }
}

/// A single-logical-qubit stabilizer code on up to 64 physical qubits.
#[derive(Debug, Clone)]
pub struct StabilizerCode {
    k_physical: usize,
    generators: Vec<PauliString>,
    logical_x: PauliString,
    logical_z: PauliString,
    /// Minimum-weight representative per syndrome class (ties broken by the
    /// lexicographically smallest label, I < X < Y < Z per qubit).
    rep_table: Vec<(u64, u64)>,
}

impl StabilizerCode {
    pub fn new(
        k_physical: usize,
        generators: Vec<PauliString>,
        logical_x: PauliString,
        logical_z: PauliString,
    ) -> Result<Self> {
        if generators.len() != k_physical - 1 {
            return Err(StabilizerError::InvalidArgument(format!(
                "expected {} generators, got {}",
                k_physical - 1,
                generators.len()
            )));
        }
        for g in &generators {
            if g.n() != k_physical {
                return Err(StabilizerError::SizeMismatch("generator size".into()));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if a.anticommutes_with(b) {
                    return Err(StabilizerError::InvalidArgument(
                        "generators do not commute".into(),
                    ));
                }
            }
        }
        // independence over F2 of the symplectic rows
        let mut rows: Vec<u128> = generators
            .iter()
            .map(|g| ((g.x_bits() as u128) << 64) | g.z_bits() as u128)
            .collect();
        let mut rank = 0usize;
        for bit in (0..128).rev() {
            let pivot = (rank..rows.len()).find(|&r| (rows[r] >> bit) & 1 == 1);
            if let Some(pr) = pivot {
                rows.swap(rank, pr);
                for r in 0..rows.len() {
                    if r != rank && (rows[r] >> bit) & 1 == 1 {
                        rows[r] ^= rows[rank];
                    }
                }
                rank += 1;
            }
        }
        if rank != generators.len() {
            return Err(StabilizerError::InvalidArgument(
                "generators are not independent over F2".into(),
            ));
        }
        if !logical_x.anticommutes_with(&logical_z) {
            return Err(StabilizerError::InvalidArgument(
                "logical X and Z must anticommute".into(),
            ));
        }
        for g in &generators {
            if logical_x.anticommutes_with(g) || logical_z.anticommutes_with(g) {
                return Err(StabilizerError::InvalidArgument(
                    "logicals must commute with the stabilizer".into(),
                ));
            }
        }
        let mut code = Self {
            k_physical,
            generators,
            logical_x,
            logical_z,
            rep_table: Vec::new(),
        };
        code.rep_table = code.build_rep_table();
        Ok(code)
    }

    /// The 7-qubit code with generators from the Hamming parity-check rows
    /// {0001111, 0110011, 1010101} in both X and Z type; logical X and Z
    /// have all-ones support.
    pub fn steane() -> Self {
        let rows: [u64; 3] = [0x78, 0x66, 0x55]; // 0-indexed masks of the rows
        let mut generators = Vec::with_capacity(6);
        for &m in &rows {
            generators.push(PauliString::from_masks(7, m, 0, 0));
        }
        for &m in &rows {
            generators.push(PauliString::from_masks(7, 0, m, 0));
        }
        let logical_x = PauliString::from_masks(7, 0x7F, 0, 0);
        let logical_z = PauliString::from_masks(7, 0, 0x7F, 0);
        Self::new(7, generators, logical_x, logical_z).expect("Steane data is consistent")
    }

    pub fn k_physical(&self) -> usize {
        self.k_physical
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn logical_x(&self) -> &PauliString {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliString {
        &self.logical_z
    }

    /// Syndrome bit i = 1 iff the error anticommutes with generator i.
    pub fn syndrome(&self, error: &PauliString) -> Result<Vec<bool>> {
        if error.n() != self.k_physical {
            return Err(StabilizerError::SizeMismatch(format!(
                "error on {} qubits vs code on {}",
                error.n(),
                self.k_physical
            )));
        }
        Ok(self
            .generators
            .iter()
            .map(|g| error.anticommutes_with(g))
            .collect())
    }

    /// Syndrome as a packed index, bit i = generator i.
    pub fn syndrome_index_of_masks(&self, x: u64, z: u64) -> usize {
        let mut s = 0usize;
        for (i, g) in self.generators.iter().enumerate() {
            let anti = sym_parity(x & g.z_bits()) ^ sym_parity(z & g.x_bits());
            if anti {
                s |= 1 << i;
            }
        }
        s
    }

    /// Minimum-weight representative error of a syndrome class.
    pub fn representative(&self, syndrome_index: usize) -> PauliString {
        let (x, z) = self.rep_table[syndrome_index];
        PauliString::from_masks(self.k_physical, x, z, 0)
    }

    /// Factor an error (up to stabilizer and phase) into its logical action
    /// and syndrome class.
    pub fn ideal_decode(&self, error: &PauliString) -> Result<(LogicalLabel, Vec<bool>)> {
        let syndrome = self.syndrome(error)?;
        let (label, _) = self.decode_masks(error.x_bits(), error.z_bits());
        Ok((label, syndrome))
    }

    /// Mask-level decoder used by the simulation hot path. Returns the
    /// logical label and the packed syndrome index.
    pub fn decode_masks(&self, x: u64, z: u64) -> (LogicalLabel, usize) {
        let s = self.syndrome_index_of_masks(x, z);
        let (rx, rz) = self.rep_table[s];
        let (qx, qz) = (x ^ rx, z ^ rz);
        // residual-class element with zero syndrome: logical content from
        // commutation with the logical operators
        let x_component =
            sym_parity(qx & self.logical_z.z_bits()) ^ sym_parity(qz & self.logical_z.x_bits());
        let z_component =
            sym_parity(qx & self.logical_x.z_bits()) ^ sym_parity(qz & self.logical_x.x_bits());
        (LogicalLabel::from_bits(x_component, z_component), s)
    }

    /// Weight of the minimum-weight representative of the class of (x, z).
    pub fn class_min_weight(&self, x: u64, z: u64) -> u32 {
        let s = self.syndrome_index_of_masks(x, z);
        let (rx, rz) = self.rep_table[s];
        (rx | rz).count_ones()
    }

    fn build_rep_table(&self) -> Vec<(u64, u64)> {
        let n_classes = 1usize << self.generators.len();
        let k = self.k_physical;
        // enumerate all Pauli label strings in (weight, lexicographic) order;
        // first hit per class wins
        let mut entries: Vec<(u32, String, u64, u64)> = Vec::with_capacity(1 << (2 * k));
        let labels = ['I', 'X', 'Y', 'Z'];
        let mut stack = vec![0usize; k];
        loop {
            let mut x = 0u64;
            let mut z = 0u64;
            let mut weight = 0u32;
            let mut s = String::with_capacity(k);
            for (q, &li) in stack.iter().enumerate() {
                s.push(labels[li]);
                match li {
                    1 => x |= 1 << q,
                    2 => {
                        x |= 1 << q;
                        z |= 1 << q;
                    }
                    3 => z |= 1 << q,
                    _ => {}
                }
                if li != 0 {
                    weight += 1;
                }
            }
            entries.push((weight, s, x, z));
            // odometer increment
            let mut pos = k;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                stack[pos] += 1;
                if stack[pos] < 4 {
                    break;
                }
                stack[pos] = 0;
            }
            if stack.iter().all(|&v| v == 0) {
                break;
            }
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let mut table = vec![None; n_classes];
        let mut filled = 0usize;
        for (_, _, x, z) in entries {
            let s = self.syndrome_index_of_masks(x, z);
            if table[s].is_none() {
                table[s] = Some((x, z));
                filled += 1;
                if filled == n_classes {
                    break;
                }
            }
        }
        table
            .into_iter()
            .map(|e| e.expect("every syndrome class is reachable"))
            .collect()
    }
}
