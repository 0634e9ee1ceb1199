//! Execution policy for the data-parallel loops (grid rows, parameter sweeps,
//! independent grid cases).
//!
//! Every loop routed through here produces bit-identical results in either
//! mode: work items are independent and no floating-point reduction crosses a
//! thread boundary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Rayon work-stealing. Without the `parallel` feature this runs sequentially.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Calls `f(row_index, row)` for every `row_len`-sized chunk of `data`.
    pub fn for_each_row<F>(self, data: &mut [f64], row_len: usize, f: F)
    where
        F: Fn(usize, &mut [f64]) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            data.par_chunks_mut(row_len)
                .enumerate()
                .for_each(|(r, row)| f(r, row));
            return;
        }
        data.chunks_mut(row_len)
            .enumerate()
            .for_each(|(r, row)| f(r, row));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_policies_agree() {
        let items: Vec<f64> = (0..257).map(|i| i as f64 * 0.1).collect();
        let seq = Exec::Sequential.map(&items, |x| x.sin() * x);
        let par = Exec::Parallel.map(&items, |x| x.sin() * x);
        assert_eq!(seq, par);

        let mut a = vec![0.0; 64 * 9];
        let mut b = a.clone();
        let fill = |r: usize, row: &mut [f64]| {
            for (i, v) in row.iter_mut().enumerate() {
                *v = (r * 100 + i) as f64;
            }
        };
        Exec::Sequential.for_each_row(&mut a, 9, fill);
        Exec::Parallel.for_each_row(&mut b, 9, fill);
        assert_eq!(a, b);
    }
}
