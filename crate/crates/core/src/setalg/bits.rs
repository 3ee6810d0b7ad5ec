//! Word-level kernels for cyclic shifts of bit-vectors.

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// Clear the bits at positions `>= n` in the final word.
#[inline]
pub(crate) fn mask_tail(words: &mut [u64], n: usize) {
    let r = n % WORD;
    if r != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << r) - 1;
        }
    }
}

/// `dst |= src << t` (bits shifted past the end of `dst` are dropped).
fn shl_or(dst: &mut [u64], src: &[u64], t: usize) {
    let len = dst.len();
    let (q, r) = (t / WORD, t % WORD);
    if q >= len {
        return;
    }
    if r == 0 {
        for i in 0..len - q {
            dst[i + q] |= src[i];
        }
    } else {
        for i in 0..len - q {
            dst[i + q] |= src[i] << r;
            if i + q + 1 < len {
                dst[i + q + 1] |= src[i] >> (WORD - r);
            }
        }
    }
}

/// `dst |= src >> s`.
fn shr_or(dst: &mut [u64], src: &[u64], s: usize) {
    let len = dst.len();
    let (q, r) = (s / WORD, s % WORD);
    if q >= len {
        return;
    }
    if r == 0 {
        for i in 0..len - q {
            dst[i] |= src[i + q];
        }
    } else {
        for i in 0..len - q {
            dst[i] |= src[i + q] >> r;
            if i + q + 1 < len {
                dst[i] |= src[i + q + 1] << (WORD - r);
            }
        }
    }
}

/// `dst |= rotate(src, t)` where rotation moves bit `i` to `(i + t) mod n`.
///
/// `src` must have no bits at positions `>= n`; `dst` keeps that invariant.
pub(crate) fn rotate_or_into(dst: &mut [u64], src: &[u64], t: usize, n: usize) {
    debug_assert_eq!(dst.len(), src.len());
    debug_assert!(t < n);
    if t == 0 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
        return;
    }
    // low part: i < n - t lands on i + t; overflow past n is masked below
    shl_or(dst, src, t);
    mask_tail(dst, n);
    // wrapped part: i >= n - t lands on i + t - n
    shr_or(dst, src, n - t);
}
