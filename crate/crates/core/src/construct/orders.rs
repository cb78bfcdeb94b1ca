//! Closed-form orders of the classical groups used as cross-checks.

use num_bigint::BigUint;
use num_traits::{One, Pow};

fn pow(q: u32, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// |SL_n(Q)|.
pub fn order_sl(n: u32, big_q: u32) -> BigUint {
    let mut o = pow(big_q, n * n.saturating_sub(1) / 2);
    for i in 2..=n {
        o *= pow(big_q, i) - BigUint::one();
    }
    o
}

/// |SU_n(q)|.
pub fn order_su(n: u32, q: u32) -> BigUint {
    let mut o = pow(q, n * n.saturating_sub(1) / 2);
    for i in 2..=n {
        let qi = pow(q, i);
        o *= if i % 2 == 0 {
            qi - BigUint::one()
        } else {
            qi + BigUint::one()
        };
    }
    o
}

/// |Sp_{2m}(q)|.
pub fn order_sp(two_m: u32, q: u32) -> BigUint {
    let m = two_m / 2;
    let mut o = pow(q, m * m);
    for i in 1..=m {
        o *= pow(q, 2 * i) - BigUint::one();
    }
    o
}

/// |G₂(q)|.
pub fn order_g2(q: u32) -> BigUint {
    pow(q, 6) * (pow(q, 6) - BigUint::one()) * (pow(q, 2) - BigUint::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        assert_eq!(order_su(4, 2), BigUint::from(25920u32));
        assert_eq!(order_su(3, 3), BigUint::from(6048u32));
        assert_eq!(order_su(3, 2), BigUint::from(216u32));
        assert_eq!(order_sl(2, 4), BigUint::from(60u32));
        assert_eq!(order_sl(1, 4), BigUint::one());
        assert_eq!(order_sp(4, 2), BigUint::from(720u32));
        assert_eq!(order_sp(4, 3), BigUint::from(51840u32));
        assert_eq!(order_sp(2, 4), BigUint::from(60u32));
        assert_eq!(order_g2(2), BigUint::from(12096u32));
        assert_eq!(order_sp(0, 4), BigUint::one());
    }
}
