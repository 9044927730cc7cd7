//! Binomials and increasing-tuple enumeration.

/// Binomial coefficient as `f64`; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Lexicographic iterator over strictly increasing `k`-tuples drawn from `1..=n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((1..=k).collect()) } else { None };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - (k - 1 - i) {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations::new(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomial() {
        for n in 0..9 {
            for k in 0..=n {
                assert_eq!(combinations(n, k).count() as f64, binomial(n as i64, k as i64));
            }
        }
        assert_eq!(combinations(3, 4).count(), 0);
    }

    #[test]
    fn tuples_are_increasing_and_ordered() {
        let all: Vec<_> = combinations(5, 3).collect();
        assert_eq!(all.first().unwrap(), &vec![1, 2, 3]);
        assert_eq!(all.last().unwrap(), &vec![3, 4, 5]);
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(all.iter().all(|t| t.windows(2).all(|p| p[0] < p[1])));
    }

    #[test]
    fn binomial_edge_cases() {
        assert_eq!(binomial(5, -1), 0.0);
        assert_eq!(binomial(5, 6), 0.0);
        assert_eq!(binomial(30, 15), 155117520.0);
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
    }
}
