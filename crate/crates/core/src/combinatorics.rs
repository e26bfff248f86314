//! Binomial coefficients and lexicographic ranking of sorted k-subsets of `1..=n`.

/// `n choose k`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Pascal table `table[m][j] = m choose j` for `m <= n`, `j <= k`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n: usize,
    k: usize,
    rows: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: usize, k: usize) -> Self {
        let width = k + 1;
        let mut rows = vec![0u64; (n + 1) * width];
        for m in 0..=n {
            rows[m * width] = 1;
            for j in 1..=k.min(m) {
                let above = rows[(m - 1) * width + j];
                let diag = rows[(m - 1) * width + j - 1];
                rows[m * width + j] = above.saturating_add(diag);
            }
        }
        BinomialTable { n, k, rows }
    }

    #[inline]
    pub fn get(&self, m: usize, j: usize) -> u64 {
        if m > self.n || j > self.k || j > m {
            0
        } else {
            self.rows[m * (self.k + 1) + j]
        }
    }
}

/// Ranks and unranks strictly increasing `k`-tuples over `1..=n` in
/// lexicographic order. Ranks are 1-based.
#[derive(Debug, Clone)]
pub struct SubsetRanker {
    n: usize,
    k: usize,
    table: BinomialTable,
}

impl SubsetRanker {
    pub fn new(n: usize, k: usize) -> Self {
        SubsetRanker {
            n,
            k,
            table: BinomialTable::new(n, k),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of k-subsets.
    pub fn count(&self) -> u64 {
        self.table.get(self.n, self.k)
    }

    /// 1-based lexicographic rank. The caller guarantees `subset` is strictly
    /// increasing, has length `k` and lies in `1..=n`.
    pub fn rank(&self, subset: &[u32]) -> u64 {
        debug_assert_eq!(subset.len(), self.k);
        let mut rank = 0u64;
        let mut prev = 0usize;
        for (i, &c) in subset.iter().enumerate() {
            let c = c as usize;
            let remaining = self.k - i - 1;
            // every subset agreeing on the prefix but with a smaller element here
            for j in prev + 1..c {
                rank += self.table.get(self.n - j, remaining);
            }
            prev = c;
        }
        rank + 1
    }

    /// Inverse of [`rank`](Self::rank); `rank` must be in `1..=count()`.
    pub fn unrank(&self, rank: u64) -> Vec<u32> {
        debug_assert!(rank >= 1 && rank <= self.count());
        let mut left = rank - 1;
        let mut out = Vec::with_capacity(self.k);
        let mut next = 1usize;
        for i in 0..self.k {
            let remaining = self.k - i - 1;
            loop {
                let block = self.table.get(self.n - next, remaining);
                if left < block {
                    break;
                }
                left -= block;
                next += 1;
            }
            out.push(next as u32);
            next += 1;
        }
        out
    }
}

/// Lexicographic iterator over strictly increasing `k`-tuples drawn from `items`.
#[derive(Debug, Clone)]
pub struct Combinations {
    items: Vec<u32>,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(items: Vec<u32>, k: usize) -> Self {
        let done = k > items.len();
        Combinations {
            items,
            idx: (0..k).collect(),
            done,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.idx.iter().map(|&i| self.items[i]).collect();
        let k = self.idx.len();
        let m = self.items.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < m - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All increasing `k`-tuples over `1..=n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Combinations {
    Combinations::new((1..=n as u32).collect(), k)
}

/// Sorts `tuple` in place and returns the sign of the sorting permutation,
/// or `0` if an entry repeats.
pub fn sort_with_sign(tuple: &mut [u32]) -> i8 {
    let mut sign = 1i8;
    // insertion sort: each adjacent swap is one transposition
    for i in 1..tuple.len() {
        let mut j = i;
        while j > 0 && tuple[j - 1] > tuple[j] {
            tuple.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if tuple.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}
