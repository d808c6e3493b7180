//! Exhaustive scan of `max_ax |sum_j e_j z_{j,ax}|` over sign vectors.
//!
//! `e` and `-e` give the same magnitudes, so only canonical vectors (first
//! nonzero entry `-1`) are visited. The vector is split into an outer prefix
//! and an inner suffix of up to [`INNER_TRITS`] entries; all inner sums are
//! tabulated once, and each full vector costs one `d`-wide addition.
//!
//! Vectors are ranked lexicographically with `-1 < 0 < +1` and the first
//! variable most significant; ties for the minimum go to the lowest rank,
//! which makes the reported arg-min independent of scheduling.

use num_traits::Signed;
use rayon::prelude::*;

use super::{FrequencyMatrix, SignVector};

const INNER_TRITS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Extremes<T> {
    pub min_max: T,
    pub argmin: SignVector,
    pub max_max: T,
}

#[derive(Clone, Copy)]
struct Local<T> {
    min: T,
    rank: (u64, u64),
    max: T,
}

fn trits(mut rank: u64, len: usize) -> Vec<i8> {
    let mut out = vec![0i8; len];
    for slot in out.iter_mut().rev() {
        *slot = (rank % 3) as i8 - 1;
        rank /= 3;
    }
    out
}

/// `+1`, `-1` or `0` for the first nonzero entry, `0` if all are zero.
fn leading(ts: &[i8]) -> i8 {
    ts.iter().copied().find(|&t| t != 0).unwrap_or(0)
}

fn add_signed<T: Copy + Signed>(acc: &mut [T], row: &[T], sign: i8) {
    match sign {
        1 => acc.iter_mut().zip(row).for_each(|(a, &x)| *a = *a + x),
        -1 => acc.iter_mut().zip(row).for_each(|(a, &x)| *a = *a - x),
        _ => {}
    }
}

fn max_abs<T: Copy + Signed + PartialOrd>(sums: impl Iterator<Item = T>) -> T {
    sums.map(|s| s.abs())
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

/// `max_ax |sum_j e_j z_{j,ax}|`, summed in variable order.
pub fn tuple_max<T: Copy + Signed + PartialOrd>(m: &FrequencyMatrix<T>, e: &[i8]) -> T {
    let mut sums = vec![T::zero(); m.axes()];
    for (j, &s) in e.iter().enumerate() {
        add_signed(&mut sums, m.row(j), s);
    }
    max_abs(sums.into_iter())
}

/// Caller guarantees `1 <= n` and that `3^n` fits the enumeration budget.
pub fn scan<T>(m: &FrequencyMatrix<T>) -> Extremes<T>
where
    T: Copy + Send + Sync + PartialOrd + Signed,
{
    let n = m.n();
    let d = m.axes();
    let k = n.min(INNER_TRITS);
    let outer_len = n - k;

    let inner_count = 3u64.pow(k as u32);
    let mut inner_sums = vec![T::zero(); inner_count as usize * d];
    let mut inner_canonical = vec![false; inner_count as usize];
    for r in 0..inner_count {
        let ts = trits(r, k);
        let slot = &mut inner_sums[r as usize * d..(r as usize + 1) * d];
        for (t, &s) in ts.iter().enumerate() {
            add_signed(slot, m.row(outer_len + t), s);
        }
        inner_canonical[r as usize] = leading(&ts) == -1;
    }

    let better_min =
        |a: &Local<T>, b: &Local<T>| a.min < b.min || (a.min == b.min && a.rank < b.rank);
    let best = (0..3u64.pow(outer_len as u32))
        .into_par_iter()
        .filter_map(|orank| {
            let ots = trits(orank, outer_len);
            let lead = leading(&ots);
            if lead == 1 {
                return None;
            }
            let mut osum = vec![T::zero(); d];
            for (j, &s) in ots.iter().enumerate() {
                add_signed(&mut osum, m.row(j), s);
            }
            let mut local: Option<Local<T>> = None;
            for r in 0..inner_count as usize {
                if lead == 0 && !inner_canonical[r] {
                    continue;
                }
                let row = &inner_sums[r * d..(r + 1) * d];
                let v = max_abs(osum.iter().zip(row).map(|(&a, &b)| a + b));
                match &mut local {
                    None => {
                        local = Some(Local {
                            min: v,
                            rank: (orank, r as u64),
                            max: v,
                        })
                    }
                    Some(l) => {
                        if v < l.min {
                            l.min = v;
                            l.rank = (orank, r as u64);
                        }
                        if v > l.max {
                            l.max = v;
                        }
                    }
                }
            }
            local
        })
        .reduce_with(|a, b| {
            let mut out = if better_min(&a, &b) { a } else { b };
            out.max = if a.max > b.max { a.max } else { b.max };
            out
        })
        .expect("at least one nonzero sign vector exists for n >= 1");

    let mut e = trits(best.rank.0, outer_len);
    e.extend(trits(best.rank.1, k));
    let min_max = tuple_max(m, &e);
    Extremes {
        min_max,
        argmin: SignVector::new(e).expect("scanned vectors are nonzero"),
        max_max: best.max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Straight enumeration of all `3^n - 1` vectors, same tie rule.
    fn naive(m: &FrequencyMatrix<i64>) -> (i64, Vec<i8>, i64) {
        let n = m.n();
        let mut best: Option<(i64, Vec<i8>)> = None;
        let mut max = 0;
        for r in 0..3u64.pow(n as u32) {
            let e = trits(r, n);
            if leading(&e) == 0 {
                continue;
            }
            let v = tuple_max(m, &e);
            max = max.max(v);
            if leading(&e) == -1 && best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, e));
            }
        }
        let (min, e) = best.unwrap();
        (min, e, max)
    }

    #[test]
    fn matches_naive_enumeration() {
        let mut seed = 0x9e37_79b9_u64;
        for n in 1..=11 {
            for d in [1, 2, 4] {
                let data: Vec<i64> = (0..n * d)
                    .map(|_| {
                        seed = seed
                            .wrapping_mul(6364136223846793005)
                            .wrapping_add(1442695040888963407);
                        (seed >> 33) as i64 % 41 - 20
                    })
                    .collect();
                let m = FrequencyMatrix::new(n, d, data);
                let got = scan(&m);
                let (min, e, max) = naive(&m);
                assert_eq!(got.min_max, min, "n={n} d={d}");
                assert_eq!(got.argmin.entries(), e.as_slice());
                assert_eq!(got.max_max, max);
            }
        }
    }

    #[test]
    fn ties_pick_lowest_rank() {
        // All vectors give the same magnitude pattern; (-1, -1) is first.
        let m = FrequencyMatrix::new(2, 1, vec![0i64, 0]);
        let got = scan(&m);
        assert_eq!(got.min_max, 0);
        assert_eq!(got.argmin.entries(), &[-1, -1]);
    }
}
