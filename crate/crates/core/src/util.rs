/// k-subsets of `0..n` as sorted index vectors, in lexicographic order.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        // rightmost position that can still be incremented
        let mut i = k;
        while i > 0 && next[i - 1] == self.n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            self.current = None;
        } else {
            next[i - 1] += 1;
            for j in i..k {
                next[j] = next[j - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Mixed-radix odometer over `len` digits each in `0..radix`, least
/// significant digit last, so successive tuples are lexicographic.
pub(crate) struct Odometer {
    radix: usize,
    current: Option<Vec<usize>>,
}

impl Odometer {
    pub(crate) fn new(len: usize, radix: usize) -> Self {
        let current = (radix > 0 || len == 0).then(|| vec![0; len]);
        Odometer { radix, current }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.radix {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

/// `base^exp`, or `None` on overflow.
pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<u64> {
    (base as u64).checked_pow(u32::try_from(exp).ok()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn odometer_counts() {
        assert_eq!(Odometer::new(3, 2).count(), 8);
        assert_eq!(Odometer::new(0, 5).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        let v: Vec<_> = Odometer::new(2, 3).take(4).collect();
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0]]);
    }
}
