//! Maximal repetitions by divide and conquer over longest common extensions.
//!
//! Every run lies inside a unique smallest recursion interval `[l, r)` and
//! crosses its midpoint `m`. For each period `p` the run is then determined
//! by two extensions anchored at the midpoint, both read off Z-arrays of the
//! two halves. Candidates found at a node may be truncated by the node
//! boundary; those fail the global maximality test and are dropped. What is
//! left are all runs, some listed again with a multiple of their minimal
//! period, which the final dedup removes.

/// Intervals at most this long are scanned directly.
const LEAF: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct RawRun {
    pub start: usize,
    pub end: usize,
    pub period: usize,
}

pub(crate) fn z_array(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        let mut k = if i < r { z[i - l].min(r - i) } else { 0 };
        if i + k >= r {
            while i + k < n && s[k] == s[i + k] {
                k += 1;
            }
            l = i;
            r = i + k;
        }
        z[i] = k;
    }
    z
}

/// `out[i] = lcp(text[i..], pattern)` for `i < limit`, given `z = z_array(pattern)`.
pub(crate) fn prefix_matches(pattern: &[u8], z: &[usize], text: &[u8], limit: usize) -> Vec<usize> {
    let limit = limit.min(text.len());
    let mut out = vec![0; limit];
    let (mut l, mut r) = (0, 0);
    for i in 0..limit {
        let mut k = if i < r { z[i - l].min(r - i) } else { 0 };
        if i + k >= r {
            while k < pattern.len() && i + k < text.len() && pattern[k] == text[i + k] {
                k += 1;
            }
            l = i;
            r = i + k;
        }
        out[i] = k;
    }
    out
}

struct Collector<'a> {
    s: &'a [u8],
    found: Vec<RawRun>,
}

impl Collector<'_> {
    fn offer(&mut self, start: usize, end: usize, period: usize) {
        let s = self.s;
        if end - start < 2 * period {
            return;
        }
        if start > 0 && s[start - 1] == s[start - 1 + period] {
            return;
        }
        if end < s.len() && s[end] == s[end - period] {
            return;
        }
        self.found.push(RawRun { start, end, period });
    }

    fn leaf(&mut self, l: usize, r: usize) {
        let s = self.s;
        for p in 1..=(r - l) / 2 {
            let mut j = l;
            while j + p < r {
                if s[j] != s[j + p] {
                    j += 1;
                    continue;
                }
                let from = j;
                while j + p < r && s[j] == s[j + p] {
                    j += 1;
                }
                self.offer(from, j + p, p);
            }
        }
    }

    fn node(&mut self, l: usize, r: usize) {
        if r - l <= LEAF {
            self.leaf(l, r);
            return;
        }
        let m = l + (r - l) / 2;
        self.crossing(l, m, r);
        self.node(l, m);
        self.node(m, r);
    }

    /// Runs of `s[l..r)` that contain both `m - 1` and `m`.
    fn crossing(&mut self, l: usize, m: usize, r: usize) {
        let s = self.s;
        let left = &s[l..m];
        let right = &s[m..r];
        let (na, nb) = (left.len(), right.len());

        let left_rev: Vec<u8> = left.iter().rev().copied().collect();
        let whole_rev: Vec<u8> = s[l..r].iter().rev().copied().collect();
        // z_right[p] = lce(m, m + p); z_left[p] = lcs(m - 1, m - 1 - p).
        let z_right = z_array(right);
        let z_left = z_array(&left_rev);

        // Second period block starts at or after m: anchor the pair (m, m + p).
        let back = prefix_matches(&left_rev, &z_left, &whole_rev, nb);
        for p in 1..=nb {
            let ahead = if p < nb { z_right[p] } else { 0 };
            let behind = back[nb - p];
            if behind >= 1 && ahead + behind >= p {
                self.offer(m - behind, m + p + ahead, p);
            }
        }

        // First period block ends at or before m: anchor the pair (m - p, m).
        let fwd = prefix_matches(right, &z_right, &s[l..r], na);
        for p in 1..=na {
            let behind = if p < na { z_left[p] } else { 0 };
            let ahead = fwd[na - p];
            if ahead >= 1 && ahead + behind >= p {
                self.offer(m - p - behind, m + ahead, p);
            }
        }
    }
}

/// All runs of `s`, each once with its minimal period, sorted by
/// `(start, period)`.
pub(crate) fn runs(s: &[u8]) -> Vec<RawRun> {
    if s.len() < 2 {
        return Vec::new();
    }
    let mut c = Collector { s, found: Vec::new() };
    c.node(0, s.len());
    let mut found = c.found;
    found.sort_unstable();
    // Same interval, several periods: all are multiples of the smallest.
    found.dedup_by(|later, earlier| later.start == earlier.start && later.end == earlier.end);
    found.sort_unstable_by_key(|r| (r.start, r.period));
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_lcp(a: &[u8], b: &[u8]) -> usize {
        a.iter().zip(b).take_while(|(x, y)| x == y).count()
    }

    #[test]
    fn z_array_matches_brute_force() {
        let s = b"0110100110010110100101100110100100";
        let z = z_array(s);
        for i in 0..s.len() {
            assert_eq!(z[i], brute_lcp(s, &s[i..]));
        }
        assert!(z_array(b"").is_empty());
    }

    #[test]
    fn prefix_matches_against_brute_force() {
        let pat = b"0010110";
        let text = b"10010110001011001011000101";
        let z = z_array(pat);
        let got = prefix_matches(pat, &z, text, 100);
        assert_eq!(got.len(), text.len());
        for i in 0..text.len() {
            assert_eq!(got[i], brute_lcp(pat, &text[i..]), "position {i}");
        }
        assert_eq!(prefix_matches(pat, &z, text, 3).len(), 3);
    }

    #[test]
    fn small_words() {
        assert_eq!(runs(b"\x00\x01\x01\x00"), vec![RawRun { start: 1, end: 3, period: 1 }]);
        assert_eq!(runs(b"\x00\x00\x00"), vec![RawRun { start: 0, end: 3, period: 1 }]);
        assert!(runs(b"\x00\x01").is_empty());
    }

    #[test]
    fn long_unary_word_is_one_run() {
        let s = vec![0u8; 1000];
        assert_eq!(runs(&s), vec![RawRun { start: 0, end: 1000, period: 1 }]);
    }
}
