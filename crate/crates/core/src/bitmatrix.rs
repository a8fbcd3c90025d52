//! Dense GF(2) matrices with rows packed into u64 words.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix {
            cols,
            words: cols.div_ceil(64),
            rows: Vec::new(),
        }
    }

    pub fn push_row<I: IntoIterator<Item = bool>>(&mut self, bits: I) {
        let mut row = vec![0u64; self.words];
        let mut len = 0;
        for (j, bit) in bits.into_iter().enumerate() {
            assert!(j < self.cols, "row longer than {} columns", self.cols);
            row[j / 64] |= (bit as u64) << (j % 64);
            len = j + 1;
        }
        assert_eq!(len, self.cols, "row shorter than {} columns", self.cols);
        self.rows.push(row);
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    pub fn row_bits(&self, r: usize) -> impl Iterator<Item = bool> + '_ {
        (0..self.cols).map(move |c| self.get(r, c))
    }

    /// Reduced row echelon form with zero rows removed; returns the rank.
    pub fn row_reduce(&mut self) -> usize {
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, b) = (c / 64, c % 64);
            let Some(p) = (rank..self.rows.len()).find(|&r| self.rows[r][w] >> b & 1 == 1) else {
                continue;
            };
            self.rows.swap(rank, p);
            let pivot = self.rows[rank].clone();
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r != rank && row[w] >> b & 1 == 1 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
            if rank == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(rank);
        rank
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce()
    }
}

impl fmt::Display for BitMatrix {
    /// One row per line, '0'/'1' characters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows() {
            let line: String = self
                .row_bits(r)
                .map(|b| if b { '1' } else { '0' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
