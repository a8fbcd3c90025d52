//! Arithmetic in GF(2^m), 2 <= m <= 20, in polynomial-basis coordinates.

pub mod linearized;
pub mod poly;

use std::fmt;
use std::ops::{Add, AddAssign};

pub use linearized::{solve_affine_linearized, AffineSolutions, LinearizedSolver};

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 20;

/// An element of GF(2^m); bit i is the coefficient of x^i.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: Self = FieldElement(0);
    pub const ONE: Self = FieldElement(1);

    /// Wraps raw coordinates. Range is checked by [`FieldCtx::element`].
    pub const fn from_coords(coords: u32) -> Self {
        FieldElement(coords)
    }

    pub const fn coords(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Validates that `h` is a proper positive divisor of `m`.
pub fn check_divisor(m: u32, h: u32) -> Result<()> {
    if h == 0 || h >= m || !m.is_multiple_of(h) {
        Err(Error::InvalidSubfield { m, h })
    } else {
        Ok(())
    }
}

/// Immutable description of GF(2^m) with log/antilog and trace tables.
///
/// Shareable across threads; every operation is a pure function of its inputs.
#[derive(Clone)]
pub struct FieldCtx {
    m: u32,
    modulus: u64,
    generator: FieldElement,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    /// `antilog[i] = g^i` for `0 <= i < 2^m - 1`, and `antilog[2^m - 1] = 1`.
    antilog: Vec<u32>,
    trace: Vec<u8>,
    /// Bit i set iff Tr(x^i) = 1, so Tr(a) = parity(a & trace_mask).
    trace_mask: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#b}", self.modulus))
            .field("generator", &self.generator)
            .finish_non_exhaustive()
    }
}

impl FieldCtx {
    /// Builds GF(2^m).
    ///
    /// With `modulus = None` the smallest irreducible polynomial of degree m
    /// (as an integer) is used. The generator is the smallest element of
    /// multiplicative order 2^m - 1.
    pub fn new(m: u32, modulus: Option<u64>) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(Error::DegreeOutOfRange {
                m,
                min: MIN_DEGREE,
                max: MAX_DEGREE,
            });
        }
        let modulus = match modulus {
            Some(f) => {
                let found = poly::degree(f).unwrap_or(0);
                if poly::degree(f) != Some(m) {
                    return Err(Error::ModulusDegree {
                        modulus: f,
                        expected: m,
                        found,
                    });
                }
                if let Some((k, common_factor)) = poly::irreducibility_witness(f) {
                    return Err(Error::ReducibleModulus {
                        modulus: f,
                        k,
                        common_factor,
                    });
                }
                f
            }
            None => poly::irreducibles(m)
                .next()
                .expect("irreducible polynomials exist in every degree"),
        };

        let order = (1u64 << m) - 1;
        let primes = prime_factors(order);
        let generator = (2..=order)
            .find(|&g| primes.iter().all(|&p| poly_pow(g, order / p, modulus) != 1))
            .expect("GF(2^m)^* is cyclic");

        let q = 1usize << m;
        let mut log = vec![0u32; q];
        let mut antilog = vec![0u32; q];
        let mut acc = 1u64;
        for (i, slot) in antilog.iter_mut().enumerate().take(q - 1) {
            *slot = acc as u32;
            log[acc as usize] = i as u32;
            acc = poly::mul_mod(acc, generator, modulus);
        }
        antilog[q - 1] = 1;
        if acc != 1 {
            return Err(Error::Inconsistent(format!(
                "generator {generator} does not return to 1 after 2^{m}-1 steps"
            )));
        }

        let mut ctx = FieldCtx {
            m,
            modulus,
            generator: FieldElement(generator as u32),
            log,
            antilog,
            trace: Vec::new(),
            trace_mask: 0,
        };
        // Tr is GF(2)-linear: evaluate on the basis, then extend by parity.
        let mut mask = 0u32;
        for i in 0..m {
            if ctx.trace_by_frobenius(FieldElement(1 << i)) {
                mask |= 1 << i;
            }
        }
        ctx.trace_mask = mask;
        ctx.trace = (0..q as u32)
            .map(|a| (a & mask).count_ones() as u8 & 1)
            .collect();
        Ok(ctx)
    }

    /// Extension degree m.
    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Field size 2^m.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Multiplicative group order 2^m - 1.
    pub fn group_order(&self) -> u32 {
        (1u32 << self.m) - 1
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Checked constructor for an element of this field.
    pub fn element(&self, coords: u64) -> Result<FieldElement> {
        if coords >> self.m != 0 {
            Err(Error::ElementOutOfRange {
                value: coords,
                m: self.m,
            })
        } else {
            Ok(FieldElement(coords as u32))
        }
    }

    /// All field elements in ascending coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..1u32 << self.m).map(FieldElement)
    }

    /// Nonzero field elements in ascending coordinate order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..1u32 << self.m).map(FieldElement)
    }

    /// Discrete log base the generator, `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// g^i for any exponent.
    pub fn exp(&self, i: u64) -> FieldElement {
        FieldElement(self.antilog[(i % self.group_order() as u64) as usize])
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.group_order();
        let mut i = self.log[a.0 as usize] + self.log[b.0 as usize];
        if i >= n {
            i -= n;
        }
        FieldElement(self.antilog[i as usize])
    }

    /// a^k with 0^0 = 1.
    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        match self.log(a) {
            None => FieldElement::ZERO,
            Some(l) => {
                let n = self.group_order() as u64;
                let e = (l as u64 * (k % n)) % n;
                FieldElement(self.antilog[e as usize])
            }
        }
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        self.log(a).map(|l| {
            let n = self.group_order();
            FieldElement(self.antilog[((n - l) % n) as usize])
        })
    }

    /// a^(2^times), the Frobenius map applied `times` times.
    pub fn frobenius(&self, a: FieldElement, times: u32) -> FieldElement {
        match self.log(a) {
            None => FieldElement::ZERO,
            Some(l) => {
                let n = self.group_order() as u64;
                let shift = times % self.m;
                let e = ((l as u64) << shift) % n;
                FieldElement(self.antilog[e as usize])
            }
        }
    }

    /// Absolute trace to GF(2), from the table.
    pub fn trace(&self, a: FieldElement) -> u8 {
        self.trace[a.0 as usize]
    }

    /// Mask `t` with Tr(a) = parity(a & t).
    pub fn trace_mask(&self) -> u32 {
        self.trace_mask
    }

    /// Coordinates of the linear functional y -> Tr(a*y): bit i is Tr(a * x^i).
    ///
    /// Linear in `a`, and `a -> trace_form(a)` is a bijection because the
    /// trace form is nondegenerate.
    pub fn trace_form(&self, a: FieldElement) -> u32 {
        let mut mask = 0;
        for i in 0..self.m {
            mask |= (self.trace(self.mul(a, FieldElement(1 << i))) as u32) << i;
        }
        mask
    }

    fn trace_by_frobenius(&self, a: FieldElement) -> bool {
        let mut acc = FieldElement::ZERO;
        let mut y = a;
        for _ in 0..self.m {
            acc += y;
            y = self.mul(y, y);
        }
        debug_assert!(acc.0 <= 1, "trace left GF(2)");
        acc == FieldElement::ONE
    }

    /// Relative trace to GF(2^h): sum of a^(2^(h*i)) for i < m/h.
    pub fn relative_trace(&self, h: u32, a: FieldElement) -> Result<FieldElement> {
        check_divisor(self.m, h)?;
        Ok(self.relative_trace_unchecked(h, a))
    }

    pub(crate) fn relative_trace_unchecked(&self, h: u32, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut y = a;
        for _ in 0..self.m / h {
            acc += y;
            y = self.frobenius(y, h);
        }
        acc
    }

    /// Whether `a` lies in the subfield GF(2^h), i.e. a^(2^h) = a.
    pub fn in_subfield(&self, h: u32, a: FieldElement) -> bool {
        self.frobenius(a, h) == a
    }

    /// Solution set of a^(2^h) x^(2^(2h)) + a x = rhs, ascending.
    pub fn solve_affine_linearized(
        &self,
        h: u32,
        a: FieldElement,
        rhs: FieldElement,
    ) -> Result<Vec<FieldElement>> {
        solve_affine_linearized(self, h, a, rhs)
    }
}

fn poly_pow(mut base: u64, mut e: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base = poly::rem(base, modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly::mul_mod(acc, base, modulus);
        }
        base = poly::mul_mod(base, base, modulus);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
