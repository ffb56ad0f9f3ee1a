//! Bijection between D-dimensional grid multi-indices and a single 1-based
//! flat index.
//!
//! With M nodes per axis, the multi-index (i_1, ..., i_D), each entry in
//! 1..=M, maps to
//!
//!   flat = M^(D-1) (i_1 - 1) + M^(D-2) (i_2 - 1) + ... + i_D,
//!
//! so axis 1 varies slowest and axis D fastest. Decoding peels digits with
//! exact integer division; the tests prove this equal to the floor-division
//! form with a small positive epsilon guard.

use crate::error::{Result, SolverError};

/// Multi-index with 1-based entries.
pub type MultiIndex = Vec<usize>;

/// 1-based flat index in 1..=M^D.
pub type FlatIndex = usize;

fn checked_total(m: usize, dims: usize) -> Result<usize> {
    m.checked_pow(dims as u32)
        .ok_or_else(|| SolverError::IndexOutOfRange(format!("M^D overflows: M={m} D={dims}")))
}

/// Flatten a multi-index.
pub fn encode(idx: &[usize], m: usize) -> Result<FlatIndex> {
    if idx.is_empty() {
        return Err(SolverError::IndexOutOfRange("empty multi-index".into()));
    }
    if m == 0 {
        return Err(SolverError::IndexOutOfRange("grid size M must be >= 1".into()));
    }
    let mut flat: usize = 0;
    for &i in idx {
        if i < 1 || i > m {
            return Err(SolverError::IndexOutOfRange(format!(
                "entry {i} outside [1, {m}]"
            )));
        }
        flat = flat
            .checked_mul(m)
            .and_then(|v| v.checked_add(i - 1))
            .ok_or_else(|| SolverError::IndexOutOfRange("flat index overflows".into()))?;
    }
    Ok(flat + 1)
}

/// Invert `encode`.
pub fn decode(flat: FlatIndex, m: usize, dims: usize) -> Result<MultiIndex> {
    if dims == 0 {
        return Err(SolverError::IndexOutOfRange("dims must be >= 1".into()));
    }
    if m == 0 {
        return Err(SolverError::IndexOutOfRange("grid size M must be >= 1".into()));
    }
    let total = checked_total(m, dims)?;
    if flat < 1 || flat > total {
        return Err(SolverError::IndexOutOfRange(format!(
            "flat index {flat} outside [1, {total}]"
        )));
    }
    let mut rest = flat - 1;
    let mut out = vec![0usize; dims];
    for slot in out.iter_mut().rev() {
        *slot = rest % m + 1;
        rest /= m;
    }
    Ok(out)
}

/// Convert a 1-based grid label i in 1..=M to the symmetric node label
/// k = i - N/2, which runs from 1 - N/2 to N/2 - 1.
pub fn node_offset(i: usize, n: usize) -> Result<i64> {
    if n < 4 || n % 2 != 0 {
        return Err(SolverError::InvalidGrid(format!(
            "N must be an even integer >= 4, got {n}"
        )));
    }
    let m = n - 1;
    if i < 1 || i > m {
        return Err(SolverError::IndexOutOfRange(format!(
            "grid label {i} outside [1, {m}]"
        )));
    }
    Ok(i as i64 - (n / 2) as i64)
}

/// Inverse of `node_offset`: i = k + N/2.
pub fn offset_to_label(k: i64, n: usize) -> Result<usize> {
    if n < 4 || n % 2 != 0 {
        return Err(SolverError::InvalidGrid(format!(
            "N must be an even integer >= 4, got {n}"
        )));
    }
    let half = (n / 2) as i64;
    if k < 1 - half || k > half - 1 {
        return Err(SolverError::IndexOutOfRange(format!(
            "node label {k} outside [{}, {}]",
            1 - half,
            half - 1
        )));
    }
    Ok((k + half) as usize)
}
