//! Row-wise loop helpers with an optional rayon backend.
//!
//! With the `parallel` feature the dispatching variants fan rows out across
//! the rayon pool; without it they fall back to the serial loops. Reductions
//! always collect per-row partials in row order and fold sequentially, so
//! results are bit-identical regardless of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Apply `f(row_index, row_slice)` to each row of `data`, in parallel when
/// the `parallel` feature is enabled.
pub fn for_each_row_mut<T, F>(data: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        data.par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
    }
    #[cfg(not(feature = "parallel"))]
    {
        for_each_row_mut_serial(data, row_len, f);
    }
}

/// Serial reference variant of [`for_each_row_mut`].
pub fn for_each_row_mut_serial<T, F>(data: &mut [T], row_len: usize, f: F)
where
    F: Fn(usize, &mut [T]),
{
    for (i, row) in data.chunks_mut(row_len).enumerate() {
        f(i, row);
    }
}

/// Map each row index to a value; the output vector is ordered by row.
pub fn map_rows<R, F>(n_rows: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n_rows).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_rows).map(f).collect()
    }
}

