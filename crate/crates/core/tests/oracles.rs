//! Independent brute-force and closed-form oracles for the core routines.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use qforms_core::arith::{self, DirichletCharacter};
use qforms_core::forms;
use qforms_core::lattice::{self, MOMENT_ORDERS};
use qforms_core::{Context, QSeries};

fn f1(x: i64, y: i64) -> i64 {
    x * x + x * y + y * y
}

#[test]
fn two_block_moments_match_four_variable_search() {
    let n_max = 30usize;
    // F_1 >= (x^2 + y^2)/2, so |x|, |y| <= sqrt(2n)
    let b = 8i64;
    let mut direct = vec![vec![BigInt::zero(); n_max + 1]; MOMENT_ORDERS.len()];
    for x1 in -b..=b {
        for x2 in -b..=b {
            let a = f1(x1, x2);
            if a as usize > n_max {
                continue;
            }
            for x3 in -b..=b {
                for x4 in -b..=b {
                    let n = (a + f1(x3, x4)) as usize;
                    if n > n_max {
                        continue;
                    }
                    for (i, &t) in MOMENT_ORDERS.iter().enumerate() {
                        direct[i][n] += Pow::pow(BigInt::from(x1), t);
                    }
                }
            }
        }
    }
    for (i, &t) in MOMENT_ORDERS.iter().enumerate() {
        assert_eq!(lattice::moment_table(2, t, n_max).values, direct[i], "t={t}");
    }
}

#[test]
fn seven_blocks_at_one_by_exhaustive_search() {
    // every vector with F_7(x) <= 1 has entries in {-1, 0, 1}
    let mut count = 0u32;
    for code in 0..3u32.pow(14) {
        let mut c = code;
        let mut x = [0i64; 14];
        for v in x.iter_mut() {
            *v = (c % 3) as i64 - 1;
            c /= 3;
        }
        let total: i64 = x.chunks(2).map(|p| f1(p[0], p[1])).sum();
        if total == 1 {
            count += 1;
        }
    }
    assert_eq!(count, 42);
    assert_eq!(lattice::s2k_bruteforce(7, 1)[1], BigInt::from(42));
}

#[test]
fn three_block_second_moment_at_one() {
    let mut m2 = 0i64;
    for code in 0..3u32.pow(6) {
        let mut c = code;
        let mut x = [0i64; 6];
        for v in x.iter_mut() {
            *v = (c % 3) as i64 - 1;
            c /= 3;
        }
        if f1(x[0], x[1]) + f1(x[2], x[3]) + f1(x[4], x[5]) == 1 {
            m2 += x[0] * x[0];
        }
    }
    assert_eq!(m2, 4);
    assert_eq!(lattice::moment_table(3, 2, 1).values[1], BigInt::from(4));
}

#[test]
fn tau_against_naive_product() {
    let n_max = 60usize;
    // q * prod (1 - q^m)^24 by repeated multiplication with (1 - q^m)
    let mut p = vec![BigInt::zero(); n_max + 1];
    p[0] = BigInt::one();
    for m in 1..=n_max {
        for _ in 0..24 {
            for i in (m..=n_max).rev() {
                let t = p[i - m].clone();
                p[i] -= t;
            }
        }
    }
    let ctx = Context::new(n_max).unwrap();
    for n in 1..=n_max {
        assert_eq!(ctx.tau(n).unwrap(), p[n - 1], "tau({n})");
    }
    assert_eq!(ctx.tau(5).unwrap(), BigInt::from(4830));
}

#[test]
fn theta_of_f1_is_weight_one_eisenstein() {
    let n_max = 200;
    let theta = forms::theta_fk(1, n_max);
    for n in 1..=n_max {
        let expect: i64 = 6 * arith::divisors(n as u64)
            .into_iter()
            .map(|d| i64::from(arith::chi3(d as i64)))
            .sum::<i64>();
        assert_eq!(theta.coefficient(n).unwrap(), &BigRational::from_integer(expect.into()));
    }
}

#[test]
fn e4_squared_is_e8() {
    let p = 80;
    let e4 = forms::eisenstein_classical(4, p);
    let e8 = forms::eisenstein_classical(8, p);
    assert_eq!(e4.mul(&e4), e8);
    let e6 = forms::eisenstein_classical(6, p);
    let e10 = forms::eisenstein_classical(10, p);
    assert_eq!(e4.mul(&e6), e10);
}

fn exp_series(a: i64, precision: usize) -> QSeries {
    // e^(a t) as a power series in t
    let mut c = BigRational::one();
    let mut out = Vec::with_capacity(precision + 1);
    for j in 0..=precision {
        if j > 0 {
            c = c * BigRational::from_integer(a.into()) / BigRational::from_integer(BigInt::from(j));
        }
        out.push(c.clone());
    }
    QSeries::from_coeffs(out)
}

fn factorial(k: u32) -> BigRational {
    BigRational::from_integer((1..=k).map(BigInt::from).product())
}

#[test]
fn bernoulli_from_generating_functions() {
    let p = 14usize;
    // (e^(f t) - 1) / t, shifted down one place
    let shifted = |f: i64| {
        let e = exp_series(f, p + 1).into_coeffs();
        QSeries::from_coeffs(e[1..].to_vec())
    };
    // t / (e^t - 1)
    let plain = shifted(1).invert().unwrap();
    // sum_{a=1}^{3} chi(a) e^(a t) / ((e^(3t) - 1) / t)
    let numer = exp_series(1, p).sub(&exp_series(2, p));
    let twisted = numer.mul(&shifted(3).invert().unwrap());
    for k in 0..=p as u32 {
        let kf = factorial(k);
        assert_eq!(arith::bernoulli(k), plain.coefficient(k as usize).unwrap() * &kf, "B_{k}");
        assert_eq!(
            arith::bernoulli_generalized(k, DirichletCharacter::Chi3),
            twisted.coefficient(k as usize).unwrap() * &kf,
            "B_{k},chi"
        );
    }
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    assert_eq!(arith::bernoulli_generalized(7, DirichletCharacter::Chi3), r(98, 3));
    assert_eq!(arith::bernoulli_generalized(9, DirichletCharacter::Chi3), r(-1618, 3));
    assert_eq!(arith::bernoulli_generalized(11, DirichletCharacter::Chi3), r(40634, 3));
}

#[test]
fn divisor_sums_by_definition() {
    for n in 1..=300u64 {
        for r in [0u32, 1, 3, 5, 7, 11] {
            let direct: BigInt = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| Pow::pow(BigInt::from(d), r))
                .sum();
            assert_eq!(arith::sigma(r, n), direct);
        }
    }
    assert_eq!(arith::sigma(3, 6), BigInt::from(252));
    assert_eq!(arith::sigma(11, 2), BigInt::from(2049));
}
