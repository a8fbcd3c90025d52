//! Polynomials over GF(2) packed into a `u64`, bit i = coefficient of x^i.
//!
//! Only what field construction needs: reduction, modular products, gcd and
//! the irreducibility test. Degrees stay below 64 for every modulus we accept.

/// Degree of `p`, or `None` for the zero polynomial.
pub fn degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Remainder of `a` modulo `m` (`m` nonzero).
pub fn rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m).expect("reduction by the zero polynomial");
    while let Some(da) = degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Product `a * b mod m`, with `a` and `b` already reduced.
pub fn mul_mod(mut a: u64, mut b: u64, m: u64) -> u64 {
    let dm = degree(m).expect("reduction by the zero polynomial");
    let top = 1u64 << dm;
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= m;
        }
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Checks irreducibility of `f` of degree `m`.
///
/// Every factor of degree d divides x^(2^d) - x, so `f` is irreducible iff
/// gcd(x^(2^k) - x mod f, f) = 1 for k = 1..=m/2. On failure returns the
/// first k and the nontrivial gcd as a witness.
pub fn irreducibility_witness(f: u64) -> Option<(u32, u64)> {
    let m = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return Some((0, f)),
    };
    if m == 1 {
        return None;
    }
    let x = rem(0b10, f);
    let mut frob = x; // x^(2^k) mod f
    for k in 1..=m / 2 {
        frob = mul_mod(frob, frob, f);
        let g = gcd(f, frob ^ x);
        if g != 1 {
            return Some((k, g));
        }
    }
    None
}

/// Irreducible polynomials of exact degree `m`, in ascending integer order.
pub fn irreducibles(m: u32) -> impl Iterator<Item = u64> {
    let lo = 1u64 << m;
    let hi = 1u64 << (m + 1);
    // Constant term must be 1 for m >= 1 or x divides f.
    (lo..hi)
        .filter(|p| p & 1 == 1)
        .filter(|&p| irreducibility_witness(p).is_none())
}
