//! Integer number theory used across the crate: primality, factoring,
//! modular exponentiation and multiplicative orders.

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Checked integer power; `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut rest = n;
    for p in 2u64..1000 {
        if rest == 1 {
            break;
        }
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Smallest `t >= 1` with `q^t = 1 (mod m)`; `None` when `gcd(q, m) != 1`.
pub fn multiplicative_order(q: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(q % m, m) != 1 {
        return None;
    }
    let phi = euler_phi(m);
    let mut order = phi;
    for p in prime_divisors(phi) {
        while order.is_multiple_of(p) && pow_mod(q, order / p, m) == 1 {
            order /= p;
        }
    }
    Some(order)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// If `n = p^k` for a prime `p` and `k >= 1`, returns `(p, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// If `n = base^k` for some `k >= 0`, returns `k`.
pub fn log_exact(base: u64, n: u64) -> Option<u32> {
    if base < 2 || n == 0 {
        return None;
    }
    let mut k = 0;
    let mut acc = 1u64;
    while acc < n {
        acc = acc.checked_mul(base)?;
        k += 1;
    }
    (acc == n).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_small() {
        let brute: Vec<u64> = (0..200)
            .filter(|&n| n >= 2 && (2..n).all(|d| n % d != 0))
            .collect();
        let fast: Vec<u64> = (0..200).filter(|&n| is_prime(n)).collect();
        assert_eq!(brute, fast);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_647 * 3));
    }

    #[test]
    fn factor_mersenne_like() {
        // 2^21 - 1 = 7^2 * 127 * 337
        assert_eq!(factorize((1 << 21) - 1), vec![(7, 2), (127, 1), (337, 1)]);
        assert_eq!(factorize(728), vec![(2, 3), (7, 1), (13, 1)]);
        let n = 4_294_967_291u64 * 4_294_967_279;
        assert_eq!(factorize(n), vec![(4_294_967_279, 1), (4_294_967_291, 1)]);
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(4, 15), Some(2));
        assert_eq!(multiplicative_order(16, 255), Some(2));
        assert_eq!(multiplicative_order(9, 728), Some(3));
        assert_eq!(multiplicative_order(2, 961), Some(155));
        assert_eq!(multiplicative_order(2, 31), Some(5));
        assert_eq!(multiplicative_order(6, 15), None);
    }

    #[test]
    fn divisor_list() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn powers() {
        assert_eq!(prime_power(729), Some((3, 6)));
        assert_eq!(prime_power(12), None);
        assert_eq!(log_exact(4, 64), Some(3));
        assert_eq!(log_exact(4, 32), None);
    }
}
