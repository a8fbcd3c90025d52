//! The Weil sum S_h(a, b) = sum over x in GF(2^m) of (-1)^Tr(a x^(2^h+1) + b x),
//! evaluated by direct summation and by the closed forms for both parities of m/h.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gf2m::{check_divisor, FieldCtx, FieldElement, LinearizedSolver};

/// An evaluated S_h(a, b).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeilSumValue {
    Exact(i64),
    /// Known up to sign: the m/h odd, Tr_h(b') = 1 branch.
    MagnitudeOnly(u64),
}

impl WeilSumValue {
    /// Whether `direct` is consistent with this value.
    pub fn agrees_with(self, direct: i64) -> bool {
        match self {
            WeilSumValue::Exact(v) => v == direct,
            WeilSumValue::MagnitudeOnly(mag) => direct != 0 && direct.unsigned_abs() == mag,
        }
    }

    pub fn exact(self) -> Option<i64> {
        match self {
            WeilSumValue::Exact(v) => Some(v),
            WeilSumValue::MagnitudeOnly(_) => None,
        }
    }
}

/// Validated arguments of S_h(a, b).
#[derive(Clone, Copy, Debug)]
pub struct WeilSumQuery<'a> {
    ctx: &'a FieldCtx,
    h: u32,
    a: FieldElement,
    b: FieldElement,
}

impl<'a> WeilSumQuery<'a> {
    pub fn new(ctx: &'a FieldCtx, h: u32, a: FieldElement, b: FieldElement) -> Result<Self> {
        check_divisor(ctx.degree(), h)?;
        if a.is_zero() {
            return Err(Error::ZeroElement("a"));
        }
        Ok(WeilSumQuery { ctx, h, a, b })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn a(&self) -> FieldElement {
        self.a
    }

    pub fn b(&self) -> FieldElement {
        self.b
    }
}

/// log of x^(2^h+1), or `None` for x = 0.
fn power_log(ctx: &FieldCtx, h: u32, x: FieldElement) -> Option<u64> {
    ctx.log(x)
        .map(|l| l as u64 * ((1u64 << h) + 1) % ctx.group_order() as u64)
}

/// Exact S_h(a, b) by summing 2^m characters.
pub fn weil_sum_direct(q: &WeilSumQuery<'_>) -> i64 {
    let ctx = q.ctx;
    let mut sum = 0i64;
    for x in ctx.elements() {
        let quad = match power_log(ctx, q.h, x) {
            Some(l) => ctx.mul(q.a, ctx.exp(l)),
            None => FieldElement::ZERO,
        };
        let t = ctx.trace(quad + ctx.mul(q.b, x));
        sum += 1 - 2 * t as i64;
    }
    sum
}

/// S_h(a, b) for every b at once, indexed by `b.coords()`.
///
/// The same sum as [`weil_sum_direct`]: the inner character
/// (-1)^Tr(b x) is (-1)^parity(x & trace_form(b)), so the whole spectrum is
/// a Walsh-Hadamard transform of x -> (-1)^Tr(a x^(2^h+1)).
pub fn weil_spectrum(ctx: &FieldCtx, h: u32, a: FieldElement) -> Result<Vec<i64>> {
    check_divisor(ctx.degree(), h)?;
    if a.is_zero() {
        return Err(Error::ZeroElement("a"));
    }
    let q = ctx.size();
    let mut w: Vec<i64> = ctx
        .elements()
        .map(|x| {
            let quad = match power_log(ctx, h, x) {
                Some(l) => ctx.mul(a, ctx.exp(l)),
                None => FieldElement::ZERO,
            };
            1 - 2 * ctx.trace(quad) as i64
        })
        .collect();
    let mut len = 1;
    while len < q {
        for block in (0..q).step_by(2 * len) {
            for i in block..block + len {
                let (u, v) = (w[i], w[i + len]);
                w[i] = u + v;
                w[i + len] = u - v;
            }
        }
        len *= 2;
    }
    let mut out = vec![0i64; q];
    for b in ctx.elements() {
        out[b.coords() as usize] = w[ctx.trace_form(b) as usize];
    }
    Ok(out)
}

/// Whether `a` is a (2^h+1)-th power in GF(2^m)^*.
pub fn is_power_2h_plus_1(ctx: &FieldCtx, h: u32, a: FieldElement) -> Result<bool> {
    let log = ctx.log(a).ok_or(Error::ZeroElement("a"))?;
    let d = ((1u32 << h) + 1).gcd(&ctx.group_order());
    Ok(log % d == 0)
}

/// Closed-form evaluator for S_h(a, .) with (h, a) fixed.
///
/// Caches the (2^h+1)-th root of `a` (m/h odd) or the reduced linearized
/// operator (m/h even) so that sweeping over b is cheap.
#[derive(Clone, Debug)]
pub struct ClosedForm<'a> {
    ctx: &'a FieldCtx,
    h: u32,
    a: FieldElement,
    kind: ClosedKind,
}

#[derive(Clone, Debug)]
enum ClosedKind {
    Odd {
        /// c^-1 where c^(2^h+1) = a.
        c_inv: FieldElement,
        magnitude: u64,
    },
    Even {
        /// (-1)^(e/h)
        sign: i64,
        e: u32,
        is_power: bool,
        solver: LinearizedSolver,
    },
}

impl<'a> ClosedForm<'a> {
    pub fn new(ctx: &'a FieldCtx, h: u32, a: FieldElement) -> Result<Self> {
        check_divisor(ctx.degree(), h)?;
        if a.is_zero() {
            return Err(Error::ZeroElement("a"));
        }
        let m = ctx.degree();
        let kind = if (m / h) % 2 == 1 {
            // gcd(2^h+1, 2^m-1) = 1, so x -> x^(2^h+1) is a bijection.
            let n = ctx.group_order() as i64;
            let exponent = (1i64 << h) + 1;
            let inv = exponent.extended_gcd(&n);
            if inv.gcd != 1 {
                return Err(Error::Inconsistent(format!(
                    "gcd(2^{h}+1, 2^{m}-1) = {} with m/h odd",
                    inv.gcd
                )));
            }
            let root_exp = inv.x.rem_euclid(n) as u64;
            let log_a = ctx.log(a).expect("nonzero") as u64;
            let c = ctx.exp(log_a * root_exp % n as u64);
            ClosedKind::Odd {
                c_inv: ctx.inv(c).expect("nonzero"),
                magnitude: 1u64 << ((m + h) / 2),
            }
        } else {
            let e = m / 2;
            ClosedKind::Even {
                sign: if (e / h).is_multiple_of(2) { 1 } else { -1 },
                e,
                is_power: is_power_2h_plus_1(ctx, h, a)?,
                solver: LinearizedSolver::new(ctx, h, a)?,
            }
        };
        Ok(ClosedForm { ctx, h, a, kind })
    }

    /// S_h(a, b) from the closed forms.
    pub fn eval(&self, b: FieldElement) -> Result<WeilSumValue> {
        let ctx = self.ctx;
        match &self.kind {
            ClosedKind::Odd { c_inv, magnitude } => {
                if b.is_zero() {
                    return Ok(WeilSumValue::Exact(0));
                }
                // S_h(a, b) = S_h(1, b c^-1)
                let shifted = ctx.mul(b, *c_inv);
                if ctx.relative_trace_unchecked(self.h, shifted) != FieldElement::ONE {
                    Ok(WeilSumValue::Exact(0))
                } else {
                    Ok(WeilSumValue::MagnitudeOnly(*magnitude))
                }
            }
            ClosedKind::Even {
                sign,
                e,
                is_power,
                solver,
            } => {
                let small = sign << e;
                let large = -(sign << (e + self.h));
                if b.is_zero() {
                    return Ok(WeilSumValue::Exact(if *is_power { large } else { small }));
                }
                let rhs = ctx.frobenius(b, self.h);
                let Some(x0) = solver.particular(rhs) else {
                    if !*is_power {
                        return Err(Error::Inconsistent(format!(
                            "linearized operator for a={} should permute GF(2^{}) but b={b} has no preimage",
                            self.a,
                            ctx.degree()
                        )));
                    }
                    return Ok(WeilSumValue::Exact(0));
                };
                if !*is_power && !solver.is_bijective() {
                    return Err(Error::Inconsistent(format!(
                        "linearized operator for non-power a={} is not a permutation",
                        self.a
                    )));
                }
                let quad = match power_log(ctx, self.h, x0) {
                    Some(l) => ctx.mul(self.a, ctx.exp(l)),
                    None => FieldElement::ZERO,
                };
                let chi = 1 - 2 * ctx.trace(quad) as i64;
                // For a (2^h+1)-th power the solvable case always carries
                // 2^(e+h), whatever Tr_h(a) is.
                let scale = if *is_power { large } else { small };
                Ok(WeilSumValue::Exact(scale * chi))
            }
        }
    }
}

/// S_h(a, b) from the closed forms.
///
/// With the `validate` feature and m <= 12 the result is checked against
/// [`weil_sum_direct`] and a disagreement is reported as an internal failure.
pub fn weil_sum_closed(q: &WeilSumQuery<'_>) -> Result<WeilSumValue> {
    let value = ClosedForm::new(q.ctx, q.h, q.a)?.eval(q.b)?;
    #[cfg(feature = "validate")]
    if q.ctx.degree() <= 12 {
        let direct = weil_sum_direct(q);
        if !value.agrees_with(direct) {
            return Err(Error::Inconsistent(format!(
                "closed form {value:?} disagrees with direct sum {direct} at h={} a={} b={}",
                q.h, q.a, q.b
            )));
        }
    }
    Ok(value)
}

/// (T0, T1): how many x have Tr(x^(2^h+1)) equal to 0 and to 1.
///
/// Counted directly, then checked against 2^(m-1) -/+ (-1)^(e/h) 2^(e+h-1).
pub fn subfield_image_counts(ctx: &FieldCtx, h: u32) -> Result<(u64, u64)> {
    check_divisor(ctx.degree(), h)?;
    let m = ctx.degree();
    if (m / h) % 2 == 1 {
        return Err(Error::OddQuotient {
            m,
            h,
            what: "the T0/T1 count",
        });
    }
    let t0 = ctx
        .elements()
        .filter(|&x| {
            let y = match power_log(ctx, h, x) {
                Some(l) => ctx.exp(l),
                None => FieldElement::ZERO,
            };
            ctx.trace(y) == 0
        })
        .count() as u64;
    let t1 = ctx.size() as u64 - t0;
    let (want0, want1) = subfield_image_counts_closed(m, h);
    if (t0 as i64, t1 as i64) != (want0, want1) {
        return Err(Error::Inconsistent(format!(
            "direct counts ({t0}, {t1}) differ from closed form ({want0}, {want1}) for m={m} h={h}"
        )));
    }
    Ok((t0, t1))
}

/// 2^(m-1) -/+ (-1)^(e/h) 2^(e+h-1), with m = 2e.
pub fn subfield_image_counts_closed(m: u32, h: u32) -> (i64, i64) {
    let e = m / 2;
    let sign = if (e / h).is_multiple_of(2) { 1i64 } else { -1 };
    let half = 1i64 << (m - 1);
    let delta = sign << (e + h - 1);
    (half - delta, half + delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(ctx: &FieldCtx, h: u32, a: FieldElement, b: FieldElement) -> i64 {
        weil_sum_direct(&WeilSumQuery::new(ctx, h, a, b).unwrap())
    }

    fn closed(ctx: &FieldCtx, h: u32, a: FieldElement, b: FieldElement) -> WeilSumValue {
        weil_sum_closed(&WeilSumQuery::new(ctx, h, a, b).unwrap()).unwrap()
    }

    #[test]
    fn gf4_hand_sums() {
        let ctx = FieldCtx::new(2, None).unwrap();
        assert_eq!(direct(&ctx, 1, FieldElement::ONE, FieldElement::ZERO), 4);
        assert_eq!(direct(&ctx, 1, ctx.generator(), FieldElement::ZERO), -2);
    }

    #[test]
    fn odd_quotient_vanishes_at_b_zero() {
        let ctx = FieldCtx::new(5, None).unwrap();
        for a in ctx.nonzero_elements() {
            assert_eq!(direct(&ctx, 1, a, FieldElement::ZERO), 0);
            assert_eq!(
                closed(&ctx, 1, a, FieldElement::ZERO),
                WeilSumValue::Exact(0)
            );
        }
    }

    #[test]
    fn gf8_branches() {
        let ctx = FieldCtx::new(3, None).unwrap();
        for b in ctx.nonzero_elements() {
            let v = closed(&ctx, 1, FieldElement::ONE, b);
            if ctx.trace(b) == 1 {
                assert_eq!(v, WeilSumValue::MagnitudeOnly(4));
            } else {
                assert_eq!(v, WeilSumValue::Exact(0));
            }
            assert!(v.agrees_with(direct(&ctx, 1, FieldElement::ONE, b)));
        }
    }

    #[test]
    fn gf64_cube_at_b_zero() {
        let ctx = FieldCtx::new(6, None).unwrap();
        let cube = ctx.pow(ctx.generator(), 3);
        assert_eq!(
            closed(&ctx, 1, cube, FieldElement::ZERO),
            WeilSumValue::Exact(16)
        );
        assert_eq!(direct(&ctx, 1, cube, FieldElement::ZERO), 16);
    }

    #[test]
    fn cubes_in_gf16() {
        let ctx = FieldCtx::new(4, None).unwrap();
        let cubes: Vec<FieldElement> = ctx.nonzero_elements().map(|x| ctx.pow(x, 3)).collect();
        for a in ctx.nonzero_elements() {
            let want = cubes.contains(&a);
            assert_eq!(is_power_2h_plus_1(&ctx, 1, a).unwrap(), want);
            assert_eq!(want, ctx.log(a).unwrap().is_multiple_of(3));
        }
        assert!(is_power_2h_plus_1(&ctx, 1, FieldElement::ZERO).is_err());
    }

    #[test]
    fn odd_quotient_everything_is_a_power() {
        for (m, h) in [(3, 1), (5, 1), (6, 2), (9, 3)] {
            let ctx = FieldCtx::new(m, None).unwrap();
            assert!(ctx
                .nonzero_elements()
                .all(|a| is_power_2h_plus_1(&ctx, h, a).unwrap()));
        }
    }

    #[test]
    fn spectrum_is_the_direct_sum() {
        for (m, h) in [(4, 1), (4, 2), (5, 1), (6, 2), (6, 3)] {
            let ctx = FieldCtx::new(m, None).unwrap();
            for a in ctx.nonzero_elements().step_by(5) {
                let spec = weil_spectrum(&ctx, h, a).unwrap();
                for b in ctx.elements() {
                    assert_eq!(spec[b.coords() as usize], direct(&ctx, h, a, b));
                }
            }
        }
    }

    #[test]
    fn closed_agrees_small_fields() {
        for m in 2..=8 {
            let ctx = FieldCtx::new(m, None).unwrap();
            for h in (1..m).filter(|h| m % h == 0) {
                for a in ctx.nonzero_elements() {
                    let cf = ClosedForm::new(&ctx, h, a).unwrap();
                    let spec = weil_spectrum(&ctx, h, a).unwrap();
                    for b in ctx.elements() {
                        let v = cf.eval(b).unwrap();
                        assert!(
                            v.agrees_with(spec[b.coords() as usize]),
                            "m={m} h={h} a={a} b={b}: {v:?} vs {}",
                            spec[b.coords() as usize]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn power_branch_ignores_relative_trace() {
        // a = g^3 in GF(16) is a cube with Tr_1(a) != 0; the solvable case
        // still has |S| = 2^(e+h) = 8 rather than 2^e = 4.
        let ctx = FieldCtx::new(4, None).unwrap();
        let mut seen = 0;
        for a in ctx.nonzero_elements() {
            if !is_power_2h_plus_1(&ctx, 1, a).unwrap() || ctx.trace(a) == 0 {
                continue;
            }
            let solver = LinearizedSolver::new(&ctx, 1, a).unwrap();
            for b in ctx.nonzero_elements() {
                if solver.particular(ctx.frobenius(b, 1)).is_some() {
                    assert_eq!(direct(&ctx, 1, a, b).abs(), 8);
                    seen += 1;
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn translation_law() {
        let ctx = FieldCtx::new(5, None).unwrap();
        for c in ctx.nonzero_elements() {
            let a = ctx.pow(c, 3);
            let c_inv = ctx.inv(c).unwrap();
            for b in ctx.nonzero_elements() {
                assert_eq!(
                    direct(&ctx, 1, a, b),
                    direct(&ctx, 1, FieldElement::ONE, ctx.mul(b, c_inv))
                );
            }
        }
    }

    #[test]
    fn subfield_counts() {
        let ctx = FieldCtx::new(4, None).unwrap();
        assert_eq!(subfield_image_counts(&ctx, 1).unwrap(), (4, 12));
        let ctx = FieldCtx::new(6, None).unwrap();
        assert_eq!(subfield_image_counts(&ctx, 1).unwrap(), (40, 24));
        let ctx = FieldCtx::new(5, None).unwrap();
        assert!(matches!(
            subfield_image_counts(&ctx, 1),
            Err(Error::OddQuotient { .. })
        ));
    }

    #[test]
    fn query_validation() {
        let ctx = FieldCtx::new(6, None).unwrap();
        assert!(WeilSumQuery::new(&ctx, 4, FieldElement::ONE, FieldElement::ZERO).is_err());
        assert!(WeilSumQuery::new(&ctx, 2, FieldElement::ZERO, FieldElement::ZERO).is_err());
    }
}
