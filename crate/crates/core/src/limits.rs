use serde::Serialize;

/// Resource caps shared by every analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest admissible iterate degree d^n.
    pub max_degree: usize,
    /// Largest finite field (number of elements) that may be constructed.
    pub max_field_size: u64,
    /// Largest admissible splitting-field degree for preimage trees.
    pub max_split_degree: usize,
    /// Bit-size cap on orbit coordinates.
    pub max_height_bits: u64,
    /// Hard cap on the number of closed points in a postcritical set.
    pub max_pc_points: usize,
    /// Seed for the equal-degree splitting stream.
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 4096,
            max_field_size: 1 << 20,
            max_split_degree: 24,
            max_height_bits: 1_000_000,
            max_pc_points: 100_000,
            seed: 0,
        }
    }
}
