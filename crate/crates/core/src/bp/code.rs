//! The fixed bijection `(ωⁿ)ⁿ → ω` on level-`n` prefix tuples.
//!
//! Tuples are flattened row-major to `k = n²` entries and ordered by shell:
//! first by their maximum entry `m`, then lexicographically inside the shell
//! `{x ∈ {0..=m}^k : max x = m}`. The shell of `m` starts at `m^k`, so the code
//! of a 1-tuple is its single entry.

use crate::error::{invalid, Error, Result};

fn pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Code of a flat `k`-tuple, `None` on `u128` overflow.
pub fn encode_flat(entries: &[u64]) -> Option<u128> {
    let k = entries.len();
    let m = entries.iter().copied().max().unwrap_or(0) as u128;
    let mut code = pow(m, k)?;
    let mut has_max = false;
    for (i, &x) in entries.iter().enumerate() {
        let r = k - i - 1;
        let all = pow(m + 1, r)?;
        let per = if has_max { all } else { all - pow(m, r)? };
        code = code.checked_add((x as u128).checked_mul(per)?)?;
        if x as u128 == m {
            has_max = true;
        }
    }
    Some(code)
}

/// Largest `m` with `m^k ≤ code`.
fn shell_of(code: u128, k: usize) -> u128 {
    if k == 1 {
        return code;
    }
    let (mut lo, mut hi) = (0u128, 1u128);
    while pow(hi, k).is_some_and(|p| p <= code) {
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pow(mid, k).is_some_and(|p| p <= code) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn decode_flat(code: u128, k: usize) -> Vec<u64> {
    if k == 0 {
        return Vec::new();
    }
    let m = shell_of(code, k);
    let mut rank = code - pow(m, k).expect("shell base fits");
    let mut has_max = false;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let r = k - i - 1;
        // counts fit: they are bounded by the shell size, which fits
        let all = pow(m + 1, r).unwrap_or(u128::MAX);
        for v in 0..=m {
            let cnt = if has_max || v == m { all } else { all - pow(m, r).unwrap_or(0) };
            if rank < cnt {
                out.push(v as u64);
                has_max |= v == m;
                break;
            }
            rank -= cnt;
        }
    }
    out
}

fn check_shape(prefixes: &[Vec<u64>]) -> Result<usize> {
    let n = prefixes.len();
    if n == 0 {
        return invalid("tuple code needs n ≥ 1");
    }
    if let Some(p) = prefixes.iter().find(|p| p.len() != n) {
        return invalid(format!("prefix of length {} in an {n}×{n} tuple", p.len()));
    }
    Ok(n)
}

/// Code of `n` prefixes of length `n`.
pub fn tuple_code(prefixes: &[Vec<u64>]) -> Result<u128> {
    check_shape(prefixes)?;
    let flat: Vec<u64> = prefixes.concat();
    encode_flat(&flat).ok_or_else(|| Error::Resource("tuple code exceeds 128 bits".into()))
}

/// Whether the code of `prefixes` is below `bound`; overflowing codes never are.
pub fn code_below(prefixes: &[Vec<u64>], bound: u128) -> Result<bool> {
    check_shape(prefixes)?;
    Ok(encode_flat(&prefixes.concat()).is_some_and(|c| c < bound))
}

pub fn tuple_decode(n: usize, code: u128) -> Vec<Vec<u64>> {
    decode_flat(code, n * n).chunks(n).map(<[u64]>::to_vec).collect()
}
