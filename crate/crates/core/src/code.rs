//! Defining-set codes C_D = {(Tr(x phi(d)))_{d in D} : x in GF(2^m)}.
//!
//! phi(d) = d^(2^h+1) for the codes built on D_0, D_1 and GF(2^m)^*, and
//! phi(d) = d for the punctured code on the image set {x^(2^h+1)}.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};
use crate::gf2m::{check_divisor, FieldCtx, FieldElement};
use crate::weil::{weil_sum_direct, ClosedForm, WeilSumQuery, WeilSumValue};

/// Default enumeration budget in coordinate evaluations (2^m messages times n).
/// Admits every code with m <= 16.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DefiningSetKind {
    /// Nonzero x with Tr(x) = 0.
    D0,
    /// x with Tr(x) = 1.
    D1,
    /// All of GF(2^m)^*.
    FullStar,
    /// {x^(2^h+1) : x != 0} as a set.
    PuncturedImage,
    /// Caller-supplied nonzero elements.
    Custom,
}

impl fmt::Display for DefiningSetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefiningSetKind::D0 => "d0",
            DefiningSetKind::D1 => "d1",
            DefiningSetKind::FullStar => "full",
            DefiningSetKind::PuncturedImage => "punctured",
            DefiningSetKind::Custom => "custom",
        })
    }
}

/// Ordered defining set; elements ascend by coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSet {
    kind: DefiningSetKind,
    elements: Vec<FieldElement>,
}

impl DefiningSet {
    /// Builds one of the standard sets. `h` only matters for `PuncturedImage`.
    pub fn new(ctx: &FieldCtx, kind: DefiningSetKind, h: u32) -> Result<Self> {
        let elements: Vec<FieldElement> = match kind {
            DefiningSetKind::D0 => ctx
                .nonzero_elements()
                .filter(|&x| ctx.trace(x) == 0)
                .collect(),
            DefiningSetKind::D1 => ctx
                .nonzero_elements()
                .filter(|&x| ctx.trace(x) == 1)
                .collect(),
            DefiningSetKind::FullStar => ctx.nonzero_elements().collect(),
            DefiningSetKind::PuncturedImage => {
                check_divisor(ctx.degree(), h)?;
                if (ctx.degree() / h) % 2 == 1 {
                    return Err(Error::OddQuotient {
                        m: ctx.degree(),
                        h,
                        what: "the punctured image set (gcd(2^h+1, 2^m-1) = 1 makes \
                               x -> x^(2^h+1) a bijection)",
                    });
                }
                let set: BTreeSet<FieldElement> = ctx
                    .nonzero_elements()
                    .map(|x| ctx.pow(x, (1 << h) + 1))
                    .collect();
                set.into_iter().collect()
            }
            DefiningSetKind::Custom => {
                return Err(Error::ParameterMismatch(
                    "custom defining sets are built with DefiningSet::custom".into(),
                ))
            }
        };
        Ok(DefiningSet { kind, elements })
    }

    /// A custom set; duplicates are merged and order is normalized.
    pub fn custom(
        ctx: &FieldCtx,
        elements: impl IntoIterator<Item = FieldElement>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for d in elements {
            ctx.element(d.coords() as u64)?;
            if d.is_zero() {
                return Err(Error::ZeroElement("defining set element"));
            }
            set.insert(d);
        }
        Ok(DefiningSet {
            kind: DefiningSetKind::Custom,
            elements: set.into_iter().collect(),
        })
    }

    pub fn kind(&self) -> DefiningSetKind {
        self.kind
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The code families the CLI and sweeps construct.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    D0,
    D1,
    Full,
    Punctured,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::D0, Variant::D1, Variant::Full, Variant::Punctured];

    pub fn build(self, ctx: &Arc<FieldCtx>, h: u32) -> Result<LinearCode> {
        match self {
            Variant::D0 => build_code(ctx, h, DefiningSet::new(ctx, DefiningSetKind::D0, h)?),
            Variant::D1 => build_code(ctx, h, DefiningSet::new(ctx, DefiningSetKind::D1, h)?),
            Variant::Full => {
                build_code(ctx, h, DefiningSet::new(ctx, DefiningSetKind::FullStar, h)?)
            }
            Variant::Punctured => punctured_code(ctx, h),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::D0 => "d0",
            Variant::D1 => "d1",
            Variant::Full => "full",
            Variant::Punctured => "punctured",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d0" => Ok(Variant::D0),
            "d1" => Ok(Variant::D1),
            "full" => Ok(Variant::Full),
            "punctured" => Ok(Variant::Punctured),
            other => Err(Error::ParameterMismatch(format!(
                "unknown variant {other:?} (expected d0, d1, full or punctured)"
            ))),
        }
    }
}

/// A constructed code with its coordinate images precomputed.
#[derive(Clone, Debug)]
pub struct LinearCode {
    ctx: Arc<FieldCtx>,
    h: u32,
    defset: DefiningSet,
    /// phi(d) for each coordinate, in defining-set order.
    images: Vec<FieldElement>,
    k: usize,
}

/// Builds C_D with phi(d) = d^(2^h+1), or phi(d) = d when `h == 0`.
pub fn build_code(ctx: &Arc<FieldCtx>, h: u32, defset: DefiningSet) -> Result<LinearCode> {
    if h != 0 {
        check_divisor(ctx.degree(), h)?;
    }
    let images = defset
        .elements()
        .iter()
        .map(|&d| if h == 0 { d } else { ctx.pow(d, (1 << h) + 1) })
        .collect();
    let mut code = LinearCode {
        ctx: Arc::clone(ctx),
        h,
        defset,
        images,
        k: 0,
    };
    code.k = code.message_basis_rows().rank();
    Ok(code)
}

/// The code on {x^(2^h+1) : x != 0} with phi(d) = d. Requires m/h even.
pub fn punctured_code(ctx: &Arc<FieldCtx>, h: u32) -> Result<LinearCode> {
    let defset = DefiningSet::new(ctx, DefiningSetKind::PuncturedImage, h)?;
    build_code(ctx, 0, defset)
}

impl LinearCode {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Exponent parameter; 0 for the identity coordinate map.
    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn defining_set(&self) -> &DefiningSet {
        &self.defset
    }

    pub fn images(&self) -> &[FieldElement] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    /// Codeword bits for message `x`.
    pub fn codeword(&self, x: FieldElement) -> Vec<bool> {
        self.images
            .iter()
            .map(|&y| self.ctx.trace(self.ctx.mul(x, y)) == 1)
            .collect()
    }

    fn message_basis_rows(&self) -> BitMatrix {
        let mut g = BitMatrix::new(self.len());
        for i in 0..self.ctx.degree() {
            g.push_row(self.codeword(FieldElement::from_coords(1 << i)));
        }
        g
    }

    /// Row-reduced generator matrix, k x n.
    pub fn generator_matrix(&self) -> BitMatrix {
        let mut g = self.message_basis_rows();
        g.row_reduce();
        g
    }

    /// Writes the header "n k m h modulus" followed by the generator matrix rows.
    pub fn export_generator_matrix<W: Write>(&self, mut out: W) -> Result<()> {
        let g = self.generator_matrix();
        writeln!(
            out,
            "{} {} {} {} {}",
            self.len(),
            g.rows(),
            self.ctx.degree(),
            self.h,
            self.ctx.modulus()
        )?;
        write!(out, "{g}")?;
        Ok(())
    }

    /// Weight of the codeword for `x`, one field product and trace lookup per coordinate.
    pub fn codeword_weight_direct(&self, x: FieldElement) -> usize {
        self.images
            .iter()
            .filter(|&&y| self.ctx.trace(self.ctx.mul(x, y)) == 1)
            .count()
    }

    /// Exact weight distribution by enumerating all 2^m messages.
    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        self.weight_distribution_with_budget(DEFAULT_BUDGET)
    }

    pub fn weight_distribution_with_budget(&self, budget: u128) -> Result<WeightDistribution> {
        let m = self.ctx.degree();
        let required = (1u128 << m) * self.len() as u128;
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        let hist = self.message_histogram();
        WeightDistribution::from_message_counts(self.len(), m, &hist).and_then(|dist| {
            if dist.k != self.k {
                Err(Error::Inconsistent(format!(
                    "enumeration implies dimension {} but the generator matrix has rank {}",
                    dist.k, self.k
                )))
            } else {
                Ok(dist)
            }
        })
    }

    /// Histogram of codeword weights over all 2^m messages.
    ///
    /// Tr(x y) = parity(y & trace_form(x)) with trace_form linear in x, so each
    /// message costs one popcount per coordinate.
    fn message_histogram(&self) -> Vec<u64> {
        let ctx = &*self.ctx;
        let m = ctx.degree();
        let basis: Vec<u32> = (0..m)
            .map(|i| ctx.trace_form(FieldElement::from_coords(1 << i)))
            .collect();
        let images: Vec<u32> = self.images.iter().map(|y| y.coords()).collect();
        let n = images.len();
        const CHUNK: u32 = 1 << 10;
        let total = 1u32 << m;
        let chunks: Vec<u32> = (0..total.div_ceil(CHUNK)).collect();
        chunks
            .par_iter()
            .map(|&c| {
                let mut hist = vec![0u64; n + 1];
                let start = c * CHUNK;
                let end = (start + CHUNK).min(total);
                for x in start..end {
                    let mut mask = 0u32;
                    let mut bits = x;
                    while bits != 0 {
                        let i = bits.trailing_zeros();
                        mask ^= basis[i as usize];
                        bits &= bits - 1;
                    }
                    let w: u32 = images.iter().map(|&y| (y & mask).count_ones() & 1).sum();
                    hist[w as usize] += 1;
                }
                hist
            })
            .reduce(
                || vec![0u64; n + 1],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    }
}

/// wt(c_b) for message b of C_{D_a} from the Weil sums:
/// 2^(m-1) - (2^(m-2) + (S_h(b,0) + (-1)^a S_h(b,1)) / 4).
///
/// Closed forms are used where they are exact; sign-ambiguous values fall
/// back to direct summation.
pub fn codeword_weight_formula(ctx: &FieldCtx, h: u32, a: u8, b: FieldElement) -> Result<u64> {
    if b.is_zero() {
        return Err(Error::ZeroElement("message b"));
    }
    if a > 1 {
        return Err(Error::ParameterMismatch(format!(
            "a must be 0 or 1, got {a}"
        )));
    }
    let closed = ClosedForm::new(ctx, h, b)?;
    let sum_at = |arg: FieldElement| -> Result<i64> {
        Ok(match closed.eval(arg)? {
            WeilSumValue::Exact(v) => v,
            WeilSumValue::MagnitudeOnly(_) => weil_sum_direct(&WeilSumQuery::new(ctx, h, b, arg)?),
        })
    };
    let s0 = sum_at(FieldElement::ZERO)?;
    let s1 = sum_at(FieldElement::ONE)?;
    let combined = s0 + if a == 0 { s1 } else { -s1 };
    if combined % 4 != 0 {
        return Err(Error::Inconsistent(format!(
            "S_h(b,0) + (-1)^a S_h(b,1) = {combined} is not divisible by 4"
        )));
    }
    let m = ctx.degree();
    let zeros = (1i64 << (m - 2)) + combined / 4;
    let weight = (1i64 << (m - 1)) - zeros;
    u64::try_from(weight)
        .map_err(|_| Error::Inconsistent(format!("negative weight {weight} for b={b}")))
}

/// Weight table over distinct codewords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    n: usize,
    k: usize,
    counts: BTreeMap<usize, u64>,
}

impl WeightDistribution {
    /// Builds a distribution; `counts` must include weight 0 and sum to 2^k.
    pub fn new(n: usize, k: usize, counts: BTreeMap<usize, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if counts.get(&0) != Some(&1) || total != 1u64 << k {
            return Err(Error::ParameterMismatch(format!(
                "counts sum to {total} with {} zero codewords; dimension {k} needs 2^{k} and exactly one",
                counts.get(&0).copied().unwrap_or(0)
            )));
        }
        if let Some(&w) = counts.keys().next_back() {
            if w > n {
                return Err(Error::ParameterMismatch(format!(
                    "weight {w} exceeds length {n}"
                )));
            }
        }
        let counts = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        Ok(WeightDistribution { n, k, counts })
    }

    /// From a histogram over all 2^m messages.
    ///
    /// The messages giving the zero word form the kernel of x -> c_x; each
    /// codeword is hit once per kernel element, so counts are divided by its size.
    pub fn from_message_counts(n: usize, m: u32, hist: &[u64]) -> Result<Self> {
        let kernel = hist.first().copied().unwrap_or(0);
        let total: u64 = hist.iter().sum();
        if total != 1u64 << m || !kernel.is_power_of_two() {
            return Err(Error::Inconsistent(format!(
                "message histogram sums to {total} with kernel size {kernel}"
            )));
        }
        let mut counts = BTreeMap::new();
        for (w, &c) in hist.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c % kernel != 0 {
                return Err(Error::Inconsistent(format!(
                    "{c} messages of weight {w} not divisible by kernel size {kernel}"
                )));
            }
            counts.insert(w, c / kernel);
        }
        let k = (m - kernel.trailing_zeros()) as usize;
        WeightDistribution::new(n, k, counts)
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn count(&self, weight: usize) -> u64 {
        self.counts.get(&weight).copied().unwrap_or(0)
    }

    /// Nonzero weights with positive multiplicity, ascending.
    pub fn nonzero_weights(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .filter(|(&w, _)| w > 0)
            .map(|(&w, &c)| (w, c))
    }

    pub fn min_distance(&self) -> Option<usize> {
        self.nonzero_weights().next().map(|(w, _)| w)
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.nonzero_weights().last().map(|(w, _)| w)
    }

    /// Number of distinct nonzero weights.
    pub fn weight_count(&self) -> usize {
        self.nonzero_weights().count()
    }
}

impl fmt::Display for WeightDistribution {
    /// Weight enumerator, e.g. `1+10x^6+15x^8+6x^10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for (w, c) in self.nonzero_weights() {
            write!(f, "+{c}x^{w}")?;
        }
        Ok(())
    }
}
