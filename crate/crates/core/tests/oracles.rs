use eisenshift::census::{exact_census, monte_carlo, wilson_interval, MonteCarloConfig, DEFAULT_ENUM_CAP};
use eisenshift::eisenstein::{
    is_eisenstein, is_eisenstein_at, naive_shift_scan, shifted_eisenstein, verify_certificate,
    DEFAULT_SCAN_CAP,
};
use eisenshift::primes::sieve_primes;
use eisenshift::{FactorBudget, IntPoly};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lattice(n: usize, h: i64) -> impl Iterator<Item = IntPoly> {
    let side = (2 * h + 1) as u64;
    (0..side.pow(n as u32 + 1)).filter_map(move |idx| {
        let mut rest = idx;
        let c: Vec<i64> = (0..=n)
            .map(|_| {
                let d = (rest % side) as i64 - h;
                rest /= side;
                d
            })
            .collect();
        (c[n] != 0).then(|| IntPoly::from_i64s(&c))
    })
}

#[test]
fn census_agrees_with_naive_scan() {
    for (n, max_h) in [(2usize, 6i64), (3, 3)] {
        for h in 1..=max_h {
            let rep = exact_census(n, h as u64, DEFAULT_ENUM_CAP).unwrap();
            let (mut total, mut plain, mut shifted) = (0, 0, 0);
            for f in lattice(n, h) {
                total += 1;
                plain += is_eisenstein(&f).unwrap() as u64;
                shifted += naive_shift_scan(&f, DEFAULT_SCAN_CAP).unwrap().is_yes() as u64;
            }
            assert_eq!(rep.samples, total);
            assert_eq!(rep.eisenstein_count, plain, "n={n} H={h}");
            assert_eq!(rep.shifted_count, shifted, "n={n} H={h}");
            assert_eq!(rep.unresolved_count, 0);
            assert!(rep.f_count <= rep.eisenstein_count);
        }
    }
}

#[test]
fn monte_carlo_covers_census_proportions() {
    let census = exact_census(2, 6, DEFAULT_ENUM_CAP).unwrap();
    let total = census.samples as f64;
    let pe = census.eisenstein_count as f64 / total;
    let ps = census.shifted_count as f64 / total;
    let ratio = census.ratio.unwrap();
    let mut covered = 0;
    for seed in 1..=10 {
        let rep = monte_carlo(&MonteCarloConfig::new(2, 6, 10_000, seed)).unwrap();
        let (le, he) = wilson_interval(rep.eisenstein_count, rep.samples);
        let (ls, hs) = wilson_interval(rep.shifted_count, rep.samples);
        let inside = (le..=he).contains(&pe)
            && (ls..=hs).contains(&ps)
            && (rep.ci_low.unwrap()..=rep.ci_high.unwrap()).contains(&ratio);
        covered += inside as u32;
    }
    assert!(covered >= 9, "covered {covered}/10");
}

/// Independent check of decisions on quartics of height 10^6: every shift
/// that works for a prime below 200 must be found, and every certificate
/// must verify.
#[test]
fn quartic_decisions_match_small_prime_search() {
    let small: Vec<u64> = sieve_primes(200);
    let budget = FactorBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let h = 1_000_000i64;
    let mut yes = 0;
    for _ in 0..3000 {
        let mut c: Vec<i64> = (0..4).map(|_| rng.gen_range(-h..=h)).collect();
        c.push(loop {
            let a = rng.gen_range(-h..=h);
            if a != 0 {
                break a;
            }
        });
        let f = IntPoly::from_i64s(&c);
        let d = shifted_eisenstein(&f, &budget).unwrap();
        assert!(d.is_certified());
        let brute = small.iter().find_map(|&p| {
            let pb = BigUint::from(p);
            let m = p as i128;
            let value_mod_p = |s: i128| c.iter().rev().fold(0i128, |acc, &a| (acc * s + a as i128).rem_euclid(m));
            (0..m)
                .filter(|&s| value_mod_p(s) == 0)
                .find(|&s| is_eisenstein_at(&f.taylor_shift(&BigInt::from(s)), &pb))
                .map(|s| (s, p))
        });
        match (d.certificate(), brute) {
            (Some(cert), _) => {
                assert!(verify_certificate(&f, cert), "{f}");
                yes += 1;
            }
            (None, Some(hit)) => panic!("{f}: missed shift {hit:?}"),
            (None, None) => {}
        }
    }
    // about 5.6% of quartics have an Eisenstein shift
    assert!((120..=220).contains(&yes), "{yes}");
}
