//! Predicted weight distributions, their verification against enumeration,
//! and the w_min/w_max secret-sharing test.
//!
//! Predicted tables count messages x in GF(2^m) (2^m entries in total),
//! which coincides with counting codewords whenever the code has dimension m.
//! All table arithmetic is exact over the rationals.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::code::{Variant, WeightDistribution, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::gf2m::{check_divisor, FieldCtx};

/// Exact rational used for table entries.
pub type Q = Ratio<i128>;

fn q(n: i128) -> Q {
    Q::from_integer(n)
}

/// 2^e for any integer exponent.
fn p2(e: i64) -> Q {
    if e >= 0 {
        q(1i128 << e)
    } else {
        Q::new(1, 1i128 << -e)
    }
}

/// The result a prediction comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    /// C_{D_0}, m/h odd.
    T1,
    /// C_{D_1}, m/h odd, multiplicities exactly as printed.
    T2,
    /// C_{D_1}, m/h odd: printed weights and A_{w_2}, other multiplicities
    /// re-derived from the first two power moments.
    T2Moment,
    /// C_{D_0}, m/h even and > 2, as printed.
    T3,
    /// C_{D_0}, m/h even and > 2: printed weights, A_{w_1} and A_{w_2},
    /// remaining multiplicities re-derived from the power moments.
    T3Moment,
    /// C_{D_1}, m/h even and > 2.
    T4,
    /// Code on GF(2^m)^*, m/h even, m > 2.
    T5,
    /// Punctured code on {x^(2^h+1)}, m/h even, m > 2.
    C6,
}

impl Source {
    pub const ALL: [Source; 8] = [
        Source::T1,
        Source::T2,
        Source::T2Moment,
        Source::T3,
        Source::T3Moment,
        Source::T4,
        Source::T5,
        Source::C6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Source::T1 => "T1",
            Source::T2 => "T2",
            Source::T2Moment => "T2m",
            Source::T3 => "T3",
            Source::T3Moment => "T3m",
            Source::T4 => "T4",
            Source::T5 => "T5",
            Source::C6 => "C6",
        }
    }

    /// The code family the table describes.
    pub fn variant(self) -> Variant {
        match self {
            Source::T1 | Source::T3 | Source::T3Moment => Variant::D0,
            Source::T2 | Source::T2Moment | Source::T4 => Variant::D1,
            Source::T5 => Variant::Full,
            Source::C6 => Variant::Punctured,
        }
    }

    /// Whether the table is reproduced verbatim rather than moment-corrected.
    pub fn is_printed(self) -> bool {
        !matches!(self, Source::T2Moment | Source::T3Moment)
    }

    pub fn hypothesis(self) -> &'static str {
        match self {
            Source::T1 | Source::T2 | Source::T2Moment => "m/h odd",
            Source::T3 | Source::T3Moment | Source::T4 => "m/h even and m/h > 2",
            Source::T5 | Source::C6 => "m/h even and m > 2",
        }
    }

    pub fn applies(self, m: u32, h: u32) -> bool {
        if check_divisor(m, h).is_err() {
            return false;
        }
        let quotient = m / h;
        match self {
            Source::T1 | Source::T2 | Source::T2Moment => quotient % 2 == 1,
            Source::T3 | Source::T3Moment | Source::T4 => {
                quotient.is_multiple_of(2) && quotient > 2
            }
            Source::T5 | Source::C6 => quotient.is_multiple_of(2) && m > 2,
        }
    }

    /// Tables checked against a variant under a table selection.
    pub fn for_variant(variant: Variant, tables: TableSet) -> impl Iterator<Item = Source> {
        Source::ALL
            .into_iter()
            .filter(move |s| s.variant() == variant && tables.includes(*s))
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which tables a verification run uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TableSet {
    /// Tables exactly as printed.
    Printed,
    /// Printed tables, with T2 and T3 replaced by their moment-corrected forms.
    Corrected,
    /// Both.
    #[default]
    All,
}

impl TableSet {
    pub fn includes(self, source: Source) -> bool {
        match self {
            TableSet::All => true,
            TableSet::Printed => source.is_printed(),
            TableSet::Corrected => !matches!(source, Source::T2 | Source::T3),
        }
    }
}

impl FromStr for TableSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(TableSet::Printed),
            "corrected" => Ok(TableSet::Corrected),
            "all" => Ok(TableSet::All),
            other => Err(Error::ParameterMismatch(format!(
                "unknown table set {other:?} (expected printed, corrected or all)"
            ))),
        }
    }
}

/// An evaluated table: (weight, multiplicity) rows over all 2^m messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremPrediction {
    source: Source,
    m: u32,
    h: u32,
    n: usize,
    rows: BTreeMap<Q, Q>,
}

/// Table rows before merging, in the order they are printed.
fn raw_rows(source: Source, m: u32, h: u32) -> Vec<(Q, Q)> {
    let (m, h) = (m as i64, h as i64);
    let e = m / 2;
    let s = q(if (e / h) % 2 == 0 { 1 } else { -1 });
    let one = q(1);
    let ph1 = p2(h) + one; // 2^h + 1
    match source {
        Source::T1 => {
            let delta = p2((m + h - 4) / 2);
            vec![
                (p2(m - 2), p2(m) - one - p2(m - h)),
                (p2(m - 2) - delta, p2(m - h - 1) + p2((m - h - 2) / 2)),
                (p2(m - 2) + delta, p2(m - h - 1) - p2((m - h - 2) / 2)),
            ]
        }
        Source::T2 | Source::T2Moment => {
            let delta = p2((m + h - 4) / 2);
            // (m - h - 4) / 2 is an integer since m - h is even here.
            vec![
                (p2(m - 2), p2(m) - one - p2(m - h)),
                (p2(m - 2) - delta, p2(m - h - 1) - p2((m - h - 4) / 2)),
                (p2(m - 2) + delta, p2(m - h - 1) + p2((m - h - 4) / 2)),
            ]
        }
        Source::T3 | Source::T3Moment => vec![
            (
                p2(m - 2) + s * p2(e + h - 1),
                (p2(m - 2 * h - 1) - one - s * p2(e - h - 1)) / ph1,
            ),
            (p2(m - 2) + s * p2(e + h - 2), (p2(h) - one) * p2(m - 2 * h)),
            (
                p2(m - 2),
                p2(m - 1) - s * (p2(h) - one) * (p2(m - 2 * h - 1) + p2(e - h - 1)),
            ),
            (
                p2(m - 2) - s * p2(e - 1),
                (p2(m + h - 1) + p2(m - 2 * h - 1) - p2(m - 1) - p2(h)
                    + s * (p2(e + h - 1) + p2(m - 1) - p2(m - 2 * h - 1)))
                    / ph1,
            ),
        ],
        Source::T4 => vec![
            (
                p2(m - 2) + s * p2(e + h - 1),
                (p2(m - 2 * h - 1) + s * p2(e - h - 1)) / ph1,
            ),
            (p2(m - 2) + s * p2(e + h - 2), (p2(h) - one) * p2(m - 2 * h)),
            (
                p2(m - 2),
                p2(m - 1) - one + s * p2(e - h - 1) * (p2(h) - one)
                    - (p2(h) - one) * p2(m - 2 * h - 1),
            ),
            (p2(m - 2) - s * p2(e - 1), (p2(e) - s) * p2(e + h - 1) / ph1),
        ],
        Source::T5 => vec![
            (p2(m - 1) - s * p2(e - 1), (p2(m) - one) * p2(h) / ph1),
            (p2(m - 1) + s * p2(e + h - 1), (p2(m) - one) / ph1),
        ],
        Source::C6 => vec![
            (
                (p2(m - 1) - s * p2(e - 1)) / ph1,
                (p2(m) - one) * p2(h) / ph1,
            ),
            ((p2(m - 1) + s * p2(e + h - 1)) / ph1, (p2(m) - one) / ph1),
        ],
    }
}

/// Code length the table describes.
fn table_length(source: Source, m: u32, h: u32) -> usize {
    match source.variant() {
        Variant::D0 => (1 << (m - 1)) - 1,
        Variant::D1 => 1 << (m - 1),
        Variant::Full => (1 << m) - 1,
        Variant::Punctured => ((1 << m) - 1) / ((1 << h) + 1),
    }
}

/// Replaces the multiplicities at `unknown` by the solution of
/// sum A = 2^m - 1 and sum w A = n 2^(m-1) over nonzero messages.
fn solve_moments(rows: &mut [(Q, Q)], unknown: [usize; 2], m: u32, n: usize) {
    let mut count = q((1i128 << m) - 1);
    let mut first = q(n as i128) * p2(m as i64 - 1);
    for (i, (w, a)) in rows.iter().enumerate() {
        if !unknown.contains(&i) {
            count -= a;
            first -= w * a;
        }
    }
    let [i, j] = unknown;
    let (wi, wj) = (rows[i].0, rows[j].0);
    // a_i + a_j = count, wi a_i + wj a_j = first
    let aj = (first - wi * count) / (wj - wi);
    rows[i].1 = count - aj;
    rows[j].1 = aj;
}

/// Evaluates the table for `source` at (m, h).
pub fn predict_distribution(m: u32, h: u32, source: Source) -> Result<TheoremPrediction> {
    if !source.applies(m, h) {
        return Err(Error::Inapplicable {
            table: source.name(),
            m,
            h,
            hypothesis: source.hypothesis(),
        });
    }
    let n = table_length(source, m, h);
    let mut raw = raw_rows(source, m, h);
    match source {
        Source::T2Moment => solve_moments(&mut raw, [1, 2], m, n),
        Source::T3Moment => solve_moments(&mut raw, [2, 3], m, n),
        _ => {}
    }
    let mut rows = BTreeMap::new();
    rows.insert(q(0), q(1));
    for (w, a) in raw {
        if a != q(0) {
            *rows.entry(w).or_insert(q(0)) += a;
        }
    }
    Ok(TheoremPrediction {
        source,
        m,
        h,
        n,
        rows,
    })
}

impl TheoremPrediction {
    pub fn source(&self) -> Source {
        self.source
    }

    pub fn params(&self) -> (u32, u32) {
        (self.m, self.h)
    }

    pub fn length(&self) -> usize {
        self.n
    }

    /// (weight, multiplicity) over messages, ascending weight, weight 0 included.
    pub fn rows(&self) -> impl Iterator<Item = (Q, Q)> + '_ {
        self.rows.iter().map(|(w, a)| (*w, *a))
    }

    pub fn multiplicity(&self, weight: usize) -> Q {
        self.rows.get(&q(weight as i128)).copied().unwrap_or(q(0))
    }

    /// Every weight and multiplicity is a non-negative integer.
    pub fn is_integral(&self) -> bool {
        self.rows
            .iter()
            .all(|(w, a)| w.is_integer() && a.is_integer() && *w >= q(0) && *a >= q(0))
    }

    /// Distinct nonzero weights.
    pub fn weight_count(&self) -> usize {
        self.rows.keys().filter(|w| **w != q(0)).count()
    }

    /// First two power moments over messages:
    /// sum over x != 0 of 1 is 2^m - 1 and of wt(c_x) is n 2^(m-1).
    pub fn moments_hold(&self) -> bool {
        let total: Q = self.rows.values().sum();
        let first: Q = self.rows.iter().map(|(w, a)| w * a).sum();
        total == q(1i128 << self.m) && first == q(self.n as i128) * p2(self.m as i64 - 1)
    }

    /// The table as a codeword distribution.
    ///
    /// Messages giving the zero word form a subspace; its size is the
    /// weight-0 multiplicity and divides every row.
    pub fn to_distribution(&self) -> Result<WeightDistribution> {
        if !self.is_integral() {
            return Err(Error::ParameterMismatch(format!(
                "{} at (m,h)=({},{}) has non-integral entries",
                self.source, self.m, self.h
            )));
        }
        let hist_len = self
            .rows
            .keys()
            .map(|w| *w.numer() as usize)
            .max()
            .unwrap_or(0)
            + 1;
        let mut hist = vec![0u64; hist_len];
        for (w, a) in &self.rows {
            hist[*w.numer() as usize] = *a.numer() as u64;
        }
        WeightDistribution::from_message_counts(self.n, self.m, &hist)
            .map_err(|e| Error::ParameterMismatch(e.to_string()))
    }
}

/// First two power moments of a code of dimension k:
/// sum over nonzero weights of A_w is 2^k - 1 and of w A_w is n 2^(k-1).
pub fn pless_check(dist: &WeightDistribution) -> bool {
    let k = dist.dimension() as u32;
    let (count, first) = dist
        .nonzero_weights()
        .fold((0u128, 0u128), |(c, f), (w, a)| {
            (c + a as u128, f + w as u128 * a as u128)
        });
    let n = dist.length() as u128;
    count + 1 == 1u128 << k && (k == 0 || first == n << (k - 1))
}

/// w_min / w_max and whether it exceeds 1/2.
pub fn secret_sharing_ratio(dist: &WeightDistribution) -> Option<(Ratio<u64>, bool)> {
    let lo = dist.min_distance()? as u64;
    let hi = dist.max_weight()? as u64;
    let ratio = Ratio::new(lo, hi);
    Some((ratio, ratio > Ratio::new(1, 2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Match,
    Mismatch,
    Inapplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Match => "match",
            Status::Mismatch => "mismatch",
            Status::Inapplicable => "inapplicable",
        })
    }
}

/// Expected and enumerated multiplicity of one weight (message counts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCheck {
    pub weight: Q,
    pub expected: Q,
    pub actual: u64,
}

impl RowCheck {
    pub fn agrees(&self) -> bool {
        self.expected == q(self.actual as i128)
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub m: u32,
    pub h: u32,
    pub variant: Variant,
    pub source: Option<Source>,
    pub status: Status,
    pub computed: WeightDistribution,
    /// One entry per weight in either table; zero-multiplicity rows dropped.
    pub details: Vec<RowCheck>,
    /// Power moments of the predicted table (`None` without a table).
    pub predicted_moments: Option<bool>,
    /// Power moments of the enumerated distribution.
    pub computed_moments: bool,
}

/// A computed distribution together with the parameters it came from.
#[derive(Clone, Debug)]
pub struct ComputedCase {
    pub m: u32,
    pub h: u32,
    pub variant: Variant,
    pub dist: WeightDistribution,
}

impl ComputedCase {
    pub fn new(m: u32, h: u32, variant: Variant, dist: WeightDistribution) -> Self {
        ComputedCase {
            m,
            h,
            variant,
            dist,
        }
    }

    /// Multiplicities over all 2^m messages.
    fn message_counts(&self) -> BTreeMap<usize, u64> {
        let scale = 1u64 << (self.m as usize - self.dist.dimension());
        self.dist
            .counts()
            .iter()
            .map(|(&w, &c)| (w, c * scale))
            .collect()
    }

    fn report_without_table(&self) -> VerificationReport {
        VerificationReport {
            m: self.m,
            h: self.h,
            variant: self.variant,
            source: None,
            status: Status::Inapplicable,
            computed: self.dist.clone(),
            details: Vec::new(),
            predicted_moments: None,
            computed_moments: pless_check(&self.dist),
        }
    }
}

/// Compares a prediction with an enumerated distribution.
pub fn verify(pred: &TheoremPrediction, computed: &ComputedCase) -> Result<VerificationReport> {
    if (pred.m, pred.h, pred.source.variant()) != (computed.m, computed.h, computed.variant) {
        return Err(Error::ParameterMismatch(format!(
            "{} at (m,h)=({},{}) describes {} codes, got {} at ({},{})",
            pred.source,
            pred.m,
            pred.h,
            pred.source.variant(),
            computed.variant,
            computed.m,
            computed.h
        )));
    }
    if pred.n != computed.dist.length() {
        return Err(Error::ParameterMismatch(format!(
            "predicted length {} but the code has length {}",
            pred.n,
            computed.dist.length()
        )));
    }
    let actual = computed.message_counts();
    let mut weights: Vec<Q> = pred.rows.keys().copied().collect();
    weights.extend(actual.keys().map(|&w| q(w as i128)));
    weights.sort();
    weights.dedup();
    let details: Vec<RowCheck> = weights
        .into_iter()
        .map(|w| RowCheck {
            weight: w,
            expected: pred.rows.get(&w).copied().unwrap_or(q(0)),
            actual: if w.is_integer() && w >= q(0) {
                actual.get(&(*w.numer() as usize)).copied().unwrap_or(0)
            } else {
                0
            },
        })
        .filter(|r| r.expected != q(0) || r.actual != 0)
        .collect();
    let status = if details.iter().all(RowCheck::agrees) {
        Status::Match
    } else {
        Status::Mismatch
    };
    Ok(VerificationReport {
        m: computed.m,
        h: computed.h,
        variant: computed.variant,
        source: Some(pred.source),
        status,
        computed: computed.dist.clone(),
        details,
        predicted_moments: Some(pred.moments_hold()),
        computed_moments: pless_check(&computed.dist),
    })
}

fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl VerificationReport {
    /// One machine-parseable line:
    /// `m h variant table status n k d w:count...`, with `-` for absent fields.
    pub fn line(&self) -> String {
        let mut s = format!(
            "{} {} {} {} {} {} {} {}",
            self.m,
            self.h,
            self.variant,
            self.source.map_or("-", Source::name),
            self.status,
            self.computed.length(),
            self.computed.dimension(),
            self.computed
                .min_distance()
                .map_or_else(|| "-".to_string(), |d| d.to_string()),
        );
        for (w, c) in self.computed.nonzero_weights() {
            let _ = write!(s, " {w}:{c}");
        }
        s
    }

    /// Human-readable mismatch rows (message counts), e.g. `w=6 expected=7 actual=6`.
    pub fn mismatch_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .details
            .iter()
            .filter(|r| !r.agrees())
            .map(|r| {
                format!(
                    "w={} expected={} actual={}",
                    fmt_q(&r.weight),
                    fmt_q(&r.expected),
                    r.actual
                )
            })
            .collect();
        if self.predicted_moments == Some(false) {
            out.push("predicted table fails the first two power moments".into());
        }
        out
    }
}

/// Totals over a list of reports, rendered as a `# summary` line.
pub fn summary(reports: &[VerificationReport]) -> String {
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    format!(
        "# summary cases={} match={} mismatch={} inapplicable={}",
        reports.len(),
        count(Status::Match),
        count(Status::Mismatch),
        count(Status::Inapplicable)
    )
}

#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub tables: TableSet,
    pub budget: u128,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            tables: TableSet::All,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Checks one constructed code against every applicable table.
pub fn verify_case(case: &ComputedCase, tables: TableSet) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for source in Source::for_variant(case.variant, tables) {
        if source.applies(case.m, case.h) {
            out.push(verify(
                &predict_distribution(case.m, case.h, source)?,
                case,
            )?);
        }
    }
    if out.is_empty() {
        out.push(case.report_without_table());
    }
    Ok(out)
}

/// Enumerates and verifies every code for m in `m_range` and every proper divisor h.
///
/// Reports come back in (m, h, variant, table) order. Cases that cannot be
/// constructed or enumerated are returned as errors in place.
pub fn sweep(
    m_range: RangeInclusive<u32>,
    options: SweepOptions,
) -> Vec<Result<VerificationReport>> {
    let mut cases = Vec::new();
    for m in m_range {
        let ctx = match FieldCtx::new(m, None) {
            Ok(ctx) => Arc::new(ctx),
            Err(e) => {
                cases.push(Err(e));
                continue;
            }
        };
        for h in (1..m).filter(|h| m % h == 0) {
            for variant in Variant::ALL {
                if variant == Variant::Punctured && (m / h) % 2 == 1 {
                    continue;
                }
                cases.push(Ok((Arc::clone(&ctx), h, variant)));
            }
        }
    }
    let per_case: Vec<Vec<Result<VerificationReport>>> = cases
        .into_par_iter()
        .map(|case| {
            let run = || -> Result<Vec<VerificationReport>> {
                let (ctx, h, variant) = case?;
                let code = variant.build(&ctx, h)?;
                let dist = code.weight_distribution_with_budget(options.budget)?;
                verify_case(
                    &ComputedCase::new(ctx.degree(), h, variant, dist),
                    options.tables,
                )
            };
            match run() {
                Ok(reports) => reports.into_iter().map(Ok).collect(),
                Err(e) => vec![Err(e)],
            }
        })
        .collect();
    per_case.into_iter().flatten().collect()
}
