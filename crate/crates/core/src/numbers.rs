//! Exact factorials, binomials and partition numbers.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

/// Size of the memoized factorial and partition tables.
pub const TABLE_SIZE: usize = 64;

fn factorial_table() -> &'static [BigUint] {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![BigUint::one()];
        for k in 1..=TABLE_SIZE {
            let next = &t[k - 1] * BigUint::from(k);
            t.push(next);
        }
        t
    })
}

pub fn factorial(k: usize) -> BigUint {
    let table = factorial_table();
    if k <= TABLE_SIZE {
        return table[k].clone();
    }
    (TABLE_SIZE + 1..=k).fold(table[TABLE_SIZE].clone(), |acc, i| acc * BigUint::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn partition_table() -> &'static [BigUint] {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| partitions_upto(TABLE_SIZE))
}

fn partitions_upto(k: usize) -> Vec<BigUint> {
    // coin-change over part sizes 1..=k
    let mut p = vec![BigUint::from(0u32); k + 1];
    p[0] = BigUint::one();
    for part in 1..=k {
        for total in part..=k {
            let add = p[total - part].clone();
            p[total] += add;
        }
    }
    p
}

/// Number of integer partitions of `k`.
pub fn partition_count(k: usize) -> BigUint {
    if k <= TABLE_SIZE {
        partition_table()[k].clone()
    } else {
        partitions_upto(k).swap_remove(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(17), BigUint::from(355_687_428_096_000u64));
        assert_eq!(factorial(66), factorial(64) * BigUint::from(65u32 * 66));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::from(0u32));
        assert_eq!(binomial(40, 20), BigUint::from(137_846_528_820u64));
    }

    #[test]
    fn partitions() {
        let small: Vec<u32> = (0..=10).map(|k| u32::try_from(partition_count(k)).unwrap()).collect();
        assert_eq!(small, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partition_count(70), partitions_upto(70)[70]);
        assert_eq!(partition_count(64), BigUint::from(1_741_630u32));
    }
}
