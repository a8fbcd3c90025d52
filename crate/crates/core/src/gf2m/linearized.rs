//! Solving a^(2^h) x^(2^(2h)) + a x = rhs over GF(2^m).
//!
//! The left side is GF(2)-linear in x, so it is written as an m x m bit
//! matrix on the polynomial-basis coordinates and reduced once; each
//! right-hand side is then a matrix-vector product plus back substitution.

use super::{check_divisor, FieldCtx, FieldElement};
use crate::error::{Error, Result};

fn parity(x: u32) -> u32 {
    x.count_ones() & 1
}

/// Reduced form of x -> a^(2^h) x^(2^(2h)) + a x for one (h, a).
#[derive(Clone, Debug)]
pub struct LinearizedSolver {
    m: u32,
    rank: u32,
    /// Pivot column of each of the first `rank` rows.
    pivots: Vec<u32>,
    /// Accumulated row operations: reduced row i = xor of original rows in transform[i].
    transform: Vec<u32>,
    kernel: Vec<FieldElement>,
}

/// An affine space particular + span(kernel).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolutions {
    pub particular: FieldElement,
    pub kernel: Vec<FieldElement>,
}

impl AffineSolutions {
    pub fn len(&self) -> usize {
        1 << self.kernel.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every solution, ascending.
    pub fn to_sorted_vec(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.len());
        for mask in 0..self.len() {
            let mut x = self.particular;
            for (i, k) in self.kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x += *k;
                }
            }
            out.push(x);
        }
        out.sort_unstable();
        out
    }
}

impl LinearizedSolver {
    pub fn new(ctx: &FieldCtx, h: u32, a: FieldElement) -> Result<Self> {
        if h == 0 || !ctx.degree().is_multiple_of(h) {
            return Err(Error::InvalidSubfield { m: ctx.degree(), h });
        }
        if a.is_zero() {
            return Err(Error::ZeroElement("coefficient a"));
        }
        let m = ctx.degree();
        let a_frob = ctx.frobenius(a, h);
        let apply = |x: FieldElement| ctx.mul(a_frob, ctx.frobenius(x, 2 * h)) + ctx.mul(a, x);

        let mut rows = vec![0u32; m as usize];
        for c in 0..m {
            let image = apply(FieldElement::from_coords(1 << c)).coords();
            for (r, row) in rows.iter_mut().enumerate() {
                *row |= (image >> r & 1) << c;
            }
        }
        let mut transform: Vec<u32> = (0..m).map(|r| 1 << r).collect();

        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..m {
            let Some(p) = (rank..m as usize).find(|&r| rows[r] >> col & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            transform.swap(rank, p);
            for r in 0..m as usize {
                if r != rank && rows[r] >> col & 1 == 1 {
                    rows[r] ^= rows[rank];
                    transform[r] ^= transform[rank];
                }
            }
            pivots.push(col);
            rank += 1;
        }

        let kernel = (0..m)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut x = 1u32 << free;
                for (i, &p) in pivots.iter().enumerate() {
                    x |= (rows[i] >> free & 1) << p;
                }
                FieldElement::from_coords(x)
            })
            .collect();

        Ok(LinearizedSolver {
            m,
            rank: rank as u32,
            pivots,
            transform,
            kernel,
        })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Number of solutions of the homogeneous equation, 2^(m - rank).
    pub fn kernel_size(&self) -> usize {
        1 << (self.m - self.rank)
    }

    /// Whether the map is a permutation of the field.
    pub fn is_bijective(&self) -> bool {
        self.rank == self.m
    }

    /// One solution for `rhs`, or `None` if the system is inconsistent.
    pub fn particular(&self, rhs: FieldElement) -> Option<FieldElement> {
        let y = rhs.coords();
        let reduced = |i: usize| parity(self.transform[i] & y);
        if (self.rank as usize..self.m as usize).any(|i| reduced(i) == 1) {
            return None;
        }
        let mut x = 0u32;
        for (i, &p) in self.pivots.iter().enumerate() {
            x |= reduced(i) << p;
        }
        Some(FieldElement::from_coords(x))
    }

    pub fn solve(&self, rhs: FieldElement) -> Option<AffineSolutions> {
        self.particular(rhs).map(|particular| AffineSolutions {
            particular,
            kernel: self.kernel.clone(),
        })
    }
}

/// Complete solution set of a^(2^h) x^(2^(2h)) + a x = rhs, ascending.
///
/// Empty when the system is inconsistent; otherwise 2^(m - rank) elements.
pub fn solve_affine_linearized(
    ctx: &FieldCtx,
    h: u32,
    a: FieldElement,
    rhs: FieldElement,
) -> Result<Vec<FieldElement>> {
    check_divisor(ctx.degree(), h)?;
    let solver = LinearizedSolver::new(ctx, h, a)?;
    Ok(solver
        .solve(rhs)
        .map(|s| s.to_sorted_vec())
        .unwrap_or_default())
}
