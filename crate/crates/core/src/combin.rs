//! k-subsets of {0..n} in lexicographic order, with ranking so that subset
//! scans can be split into independent index ranges.

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The subset of lexicographic rank `rank` among the k-subsets of {0..n}.
pub fn unrank(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let mut x = next;
        loop {
            let below = binomial(n - x - 1, k - slot - 1);
            if rank < below {
                break;
            }
            rank -= below;
            x += 1;
        }
        out.push(x);
        next = x + 1;
    }
    out
}

/// Advance to the next k-subset in lexicographic order; false when exhausted.
pub fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Visit every k-subset with rank in `[lo, hi)`; stops early if `f` returns false.
pub fn for_each_in_range(
    n: usize,
    k: usize,
    lo: u128,
    hi: u128,
    mut f: impl FnMut(&[usize]) -> bool,
) {
    if lo >= hi {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut s = unrank(n, k, lo);
    let mut r = lo;
    loop {
        if !f(&s) {
            return;
        }
        r += 1;
        if r >= hi || !next_subset(&mut s, n) {
            return;
        }
    }
}
