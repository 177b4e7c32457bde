//! Exact integer binomials and factorials.

/// `n choose k` in exact integer arithmetic; zero when `k` is out of range.
pub(crate) fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub(crate) fn factorial(n: u32) -> u128 {
    assert!(n <= 34, "factorial({n}) overflows u128");
    (1..=n as u128).product()
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_rows() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, 0), 1);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(3, -1), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
        for n in 1..30 {
            for k in 1..n {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k)
                );
            }
        }
    }

    #[test]
    fn small_factorials() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(5), 120);
        assert_eq!(gcd(12, 18), 6);
    }
}
