//! Deterministic reductions.
//!
//! Every parallel sum in the crate goes through this module. Work is split
//! into fixed-size chunks, each chunk is reduced sequentially with
//! compensated summation, and the chunk partials are combined in chunk
//! order. The result is therefore bitwise identical for any thread count,
//! including the sequential build without the `parallel` feature.

use std::ops::Range;

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length used by [`chunked_sum`] when callers have no better choice.
pub const DEFAULT_CHUNK: usize = 4096;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Fold another partial sum into this one.
    #[inline]
    pub fn merge(&mut self, other: Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex values (independent real and imaginary lanes).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub const fn new() -> Self {
        Self { re: Neumaier::new(), im: Neumaier::new() }
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: ComplexNeumaier) {
        self.re.merge(other.re);
        self.im.merge(other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = Neumaier::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

fn chunk_ranges(len: usize, chunk: usize) -> Vec<Range<usize>> {
    let chunk = chunk.max(1);
    (0..len.div_ceil(chunk))
        .map(|c| c * chunk..((c + 1) * chunk).min(len))
        .collect()
}

fn reduce_chunk<F: Fn(usize) -> f64>(range: Range<usize>, f: &F) -> Neumaier {
    let mut acc = Neumaier::new();
    for i in range {
        acc.add(f(i));
    }
    acc
}

fn combine(partials: &[Neumaier]) -> f64 {
    let mut total = Neumaier::new();
    for p in partials {
        total.merge(*p);
    }
    total.value()
}

/// `Σ_{i<len} f(i)` with chunked compensated reduction, always on the calling thread.
pub fn chunked_sum_seq<F: Fn(usize) -> f64>(len: usize, chunk: usize, f: F) -> f64 {
    let partials: Vec<Neumaier> = chunk_ranges(len, chunk)
        .into_iter()
        .map(|r| reduce_chunk(r, &f))
        .collect();
    combine(&partials)
}

/// `Σ_{i<len} f(i)` with chunked compensated reduction.
///
/// Chunks run on the rayon pool when the `parallel` feature is enabled. The
/// result is bitwise identical to [`chunked_sum_seq`].
pub fn chunked_sum<F: Fn(usize) -> f64 + Sync + Send>(len: usize, chunk: usize, f: F) -> f64 {
    #[cfg(feature = "parallel")]
    {
        let partials: Vec<Neumaier> = chunk_ranges(len, chunk)
            .into_par_iter()
            .map(|r| reduce_chunk(r, &f))
            .collect();
        combine(&partials)
    }
    #[cfg(not(feature = "parallel"))]
    {
        chunked_sum_seq(len, chunk, f)
    }
}

/// Ordered map over `0..len`, sequential.
pub fn map_indexed_seq<T, F: Fn(usize) -> T>(len: usize, f: F) -> Vec<T> {
    (0..len).map(f).collect()
}

/// Ordered map over `0..len`. Output order never depends on scheduling.
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(len: usize, f: F) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_seq(len, f)
    }
}

/// Run two closures, concurrently when the `parallel` feature is on.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_small_addends() {
        let mut acc = Neumaier::new();
        acc.add(1.0);
        acc.add(1e100);
        acc.add(1.0);
        acc.add(-1e100);
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn chunked_matches_sequential_bitwise() {
        let f = |i: usize| ((i as f64) * 0.37).sin() * 10f64.powi((i % 7) as i32);
        for chunk in [1, 3, 64, 10_000] {
            let a = chunked_sum(5000, chunk, f);
            let b = chunked_sum_seq(5000, chunk, f);
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn empty_ranges() {
        assert_eq!(chunked_sum(0, 16, |_| 1.0), 0.0);
        assert!(map_indexed(0, |i| i).is_empty());
    }

    #[test]
    fn map_keeps_order() {
        let v = map_indexed(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
    }
}
