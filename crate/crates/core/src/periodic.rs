//! Eventually periodic sequences in canonical form.

/// Rewrites `pre · per^∞` so that `per` is primitive and `pre` is as short as possible.
///
/// Two pairs describe the same infinite sequence iff their normal forms are equal.
pub(crate) fn normalize(mut pre: Vec<u8>, mut per: Vec<u8>) -> (Vec<u8>, Vec<u8>) {
    debug_assert!(!per.is_empty());
    let n = per.len();
    if let Some(d) = (1..n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| per[i] == per[i - d])) {
        per.truncate(d);
    }
    while let (Some(&p), Some(&q)) = (pre.last(), per.last()) {
        if p != q {
            break;
        }
        pre.pop();
        per.rotate_right(1);
    }
    (pre, per)
}

/// Index of the canonical representative of position `k` in a sequence of this shape.
#[inline]
pub(crate) fn canonical_index(pre_len: usize, per_len: usize, k: usize) -> usize {
    if k < pre_len {
        k
    } else {
        pre_len + (k - pre_len) % per_len
    }
}

/// Drops the first `k` symbols.
pub(crate) fn shift(pre: &[u8], per: &[u8], k: usize) -> (Vec<u8>, Vec<u8>) {
    if k <= pre.len() {
        return normalize(pre[k..].to_vec(), per.to_vec());
    }
    let r = (k - pre.len()) % per.len();
    let mut p = per.to_vec();
    p.rotate_left(r);
    normalize(Vec::new(), p)
}
