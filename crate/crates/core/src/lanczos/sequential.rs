//! Sequential block Lanczos: an independent ordinary Lanczos run per column.

use crate::error::{Error, Result};
use crate::graph::{BlockVector, OpCounters, SparseSymMatrix};
use crate::kernel::KernelFunction;

use super::{check_m, global_block_lanczos, LanczosOptions};

/// Approximant together with the number of iterations each column ran.
#[derive(Debug, Clone)]
pub struct SequentialResult {
    pub block: BlockVector,
    pub effective_m: Vec<usize>,
}

/// Column `i` of the result is the `N = 1` Lanczos approximant of
/// `φ(L)·e_{w_i}`. Only one column's basis is alive at a time.
pub fn sequential_lanczos_approximate(
    l: &SparseSymMatrix,
    e_w: &BlockVector,
    m: usize,
    phi: &KernelFunction,
    opts: LanczosOptions,
    counters: &mut OpCounters,
) -> Result<SequentialResult> {
    check_m(m)?;
    if e_w.n() != l.n() {
        return Err(Error::DimensionMismatch {
            expected: l.n(),
            found: e_w.n(),
        });
    }
    let mut block = BlockVector::zeros(l.n(), e_w.width());
    let mut effective_m = Vec::with_capacity(e_w.width());
    for i in 0..e_w.width() {
        let col = BlockVector::from_matrix(e_w.columns(i, i + 1));
        let f = global_block_lanczos(l, &col, m, opts, counters)?;
        let approx = f.approximate(phi, counters)?;
        block.col_mut(i).copy_from_slice(approx.col(0));
        effective_m.push(f.effective_m());
    }
    Ok(SequentialResult { block, effective_m })
}
