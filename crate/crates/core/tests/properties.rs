mod common;

use std::sync::{Arc, OnceLock};

use grl_core::code::{
    classify, dual_distance, min_distance, min_distance_exact, Distance, LinearCode, SearchOptions,
};
use grl_core::families::{construct, FamilyParams};
use grl_core::field::{Elem, Field, QuadraticExtension};
use grl_core::grl::{subset_sum_count, subset_sum_witness};
use grl_core::linalg::Matrix;
use grl_core::par::Exec;
use grl_core::quantum::{qgrl_parameters, Defect, QuantumParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDERS: [(u32, u32); 9] = [
    (2, 2),
    (2, 3),
    (3, 2),
    (2, 4),
    (5, 2),
    (3, 3),
    (7, 2),
    (3, 4),
    (11, 2),
];

fn fields() -> &'static [Arc<Field>] {
    static CELL: OnceLock<Vec<Arc<Field>>> = OnceLock::new();
    CELL.get_or_init(|| {
        ORDERS
            .iter()
            .map(|&(p, m)| Field::new(p, m).unwrap())
            .collect()
    })
}

fn extensions() -> &'static [Arc<QuadraticExtension>] {
    static CELL: OnceLock<Vec<Arc<QuadraticExtension>>> = OnceLock::new();
    CELL.get_or_init(|| {
        [2, 3, 4, 5, 7, 8, 9]
            .iter()
            .map(|&q| QuadraticExtension::for_q(q).unwrap())
            .collect()
    })
}

/// Schoolbook polynomial product reduced by the modulus, on digit vectors.
fn digit_mul(f: &Field, a: Elem, b: Elem) -> Elem {
    let spec = f.spec();
    let (p, m) = (spec.p as u64, spec.m as usize);
    let (da, db) = (f.digits(a), f.digits(b));
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    for top in (m..2 * m).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (i, &mc) in spec.modulus.iter().enumerate() {
            let idx = top - m + i;
            prod[idx] = (prod[idx] + (p - c) * mc as u64) % p;
        }
    }
    let digits: Vec<u32> = prod[..m].iter().map(|&x| x as u32).collect();
    f.from_digits(&digits)
}

fn digit_add(f: &Field, a: Elem, b: Elem) -> Elem {
    let p = f.characteristic();
    let digits: Vec<u32> = f
        .digits(a)
        .iter()
        .zip(f.digits(b))
        .map(|(&x, y)| (x + y) % p)
        .collect();
    f.from_digits(&digits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn arithmetic_matches_digit_oracle(fi in 0..ORDERS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[fi];
        let q = f.order();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(a, b), digit_add(f, a, b));
        prop_assert_eq!(f.mul(a, b), digit_mul(f, a, b));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if a != 0 {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), 1);
            prop_assert_eq!(f.exp(f.log(a).unwrap() as u64), a);
            prop_assert_eq!(f.pow(a, (q - 1) as u64), 1);
        } else {
            prop_assert!(f.inv(0).is_err());
        }
    }

    #[test]
    fn conjugation_and_norm(ei in 0..7usize, a in any::<u32>(), b in any::<u32>()) {
        let ext = &extensions()[ei];
        let f = ext.ext();
        let q = ext.q() as u64;
        let (a, b) = (a % f.order(), b % f.order());
        prop_assert_eq!(ext.conj(a), f.pow(a, q));
        prop_assert_eq!(ext.conj(ext.conj(a)), a);
        prop_assert_eq!(ext.conj(f.add(a, b)), f.add(ext.conj(a), ext.conj(b)));
        prop_assert_eq!(ext.norm(f.mul(a, b)), f.mul(ext.norm(a), ext.norm(b)));
        prop_assert!(ext.in_base(ext.norm(a)));
        prop_assert_eq!(ext.in_base(a), ext.conj(a) == a);
        if let Some(c) = ext.restrict(a) {
            prop_assert_eq!(ext.embed(c), a);
        }
        if a != 0 {
            // `a` is itself a preimage, so the minimal one cannot be larger.
            let target = ext.norm(a);
            let root = ext.solve_norm(target).unwrap();
            prop_assert_eq!(ext.norm(root), target);
            prop_assert!(root <= a);
        }
    }

    #[test]
    fn matrix_identities(fi in 0..5usize, r in 1..5usize, c in 1..7usize, seed in any::<u64>()) {
        let f = fields()[fi].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<Elem> = (0..r * c).map(|_| rand::Rng::gen_range(&mut rng, 0..f.order())).collect();
        let m = Matrix::new(f.clone(), r, c, data).unwrap();
        let rank = m.rank();
        prop_assert_eq!(rank, common::rank(&f, &m.to_rows()));
        prop_assert_eq!(m.transpose().rank(), rank);
        let kernel = m.right_kernel();
        prop_assert_eq!(kernel.rows(), c - rank);
        if kernel.rows() > 0 {
            prop_assert!(m.mul(&kernel.transpose()).unwrap().is_zero());
        }
        prop_assert_eq!(Matrix::from_gfmat(&m.to_gfmat()).unwrap(), m.clone());
        let sq = common::random_nonsingular(&mut rng, &f, r);
        let prod = sq.mul(&sq.inverse().unwrap()).unwrap();
        prop_assert_eq!(prod, Matrix::identity(f.clone(), r));
    }

    #[test]
    fn subset_sum_witness_matches_count(fi in 0..6usize, size in 1..9usize, t in 0..9usize, delta in any::<u32>(), seed in any::<u64>()) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = size.min(f.order() as usize);
        let set = common::random_distinct(&mut rng, f, size);
        let delta = delta % f.order();
        let count = subset_sum_count(f, &set, t, delta).unwrap();
        let witness = subset_sum_witness(f, &set, t, delta).unwrap();
        prop_assert_eq!(witness.is_some(), count > 0);
        if let Some(w) = witness {
            prop_assert_eq!(w.len(), t);
            prop_assert!(w.windows(2).all(|p| p[0] < p[1]));
            prop_assert_eq!(f.sum(w.iter().map(|&i| set[i])), delta);
        }
    }

    #[test]
    fn defect_round_trips(twice in -400i64..400) {
        let d = Defect { twice };
        prop_assert_eq!(Defect::parse(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn exact_quantum_params_respect_singleton(n in 1usize..80, kq in 0usize..80, d in 1usize..40) {
        match QuantumParams::new(n, kq, Distance::exact(d), 9) {
            Ok(p) => {
                prop_assert!(p.n - p.kq + 2 >= 2 * d);
                let r = p.defect();
                prop_assert!(r.defect.twice >= 0);
                prop_assert_eq!(r.mds, r.defect.twice == 0);
            }
            Err(_) => prop_assert!(kq > n || n - kq + 2 < 2 * d),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn distance_routes_agree(fi in 0..4usize, n in 2..7usize, k in 1..4usize, s in 2..4usize, seed in any::<u64>()) {
        let f = fields()[fi].clone();
        prop_assume!(n <= f.order() as usize && k <= n && s <= k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = common::random_spec(&mut rng, &f, n, k, s).code();
        let g = code.gen().clone();
        let seq = SearchOptions::default().with_exec(Exec::Sequential);
        let par = SearchOptions::default().with_exec(Exec::Parallel);
        let brute = common::brute_distance(&g);
        prop_assert_eq!(min_distance_exact(&code, seq).unwrap(), brute);
        prop_assert_eq!(min_distance(&code, par).unwrap(), brute);
        prop_assert_eq!(dual_distance(&code, seq).unwrap(), common::brute_dual_distance(&g));
        prop_assert_eq!(classify(&code, seq).unwrap(), classify(&code, par).unwrap());
        // Forcing the column-scan route with a budget too small to enumerate.
        let words = (f.order() as u128).pow(k as u32);
        if words > 8 {
            let scan = min_distance(&code, SearchOptions::default().with_budget(words - 1));
            if let Ok(d) = scan {
                prop_assert_eq!(d, brute);
            }
        }
    }

    #[test]
    fn dual_of_dual_is_the_code(fi in 0..5usize, r in 1..4usize, c in 2..7usize, seed in any::<u64>()) {
        let f = fields()[fi].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<Elem> = (0..r * c).map(|_| rand::Rng::gen_range(&mut rng, 0..f.order())).collect();
        let code = LinearCode::spanned_by(&Matrix::new(f, r, c, data).unwrap());
        let dual = code.dual();
        prop_assert_eq!(code.k() + dual.k(), code.n());
        prop_assert!(code.is_subcode_of(&dual.dual()).unwrap());
        prop_assert!(dual.dual().is_subcode_of(&code).unwrap());
    }

    #[test]
    fn hermitian_dual_is_conjugated_euclidean_dual(ei in 0..5usize, r in 1..4usize, c in 2..6usize, seed in any::<u64>()) {
        let ext = &extensions()[ei];
        let f = ext.ext().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<Elem> = (0..r * c).map(|_| rand::Rng::gen_range(&mut rng, 0..f.order())).collect();
        let code = LinearCode::spanned_by(&Matrix::new(f, r, c, data).unwrap());
        let hdual = code.hermitian_dual(ext).unwrap();
        let conj = LinearCode::spanned_by(&code.dual().gen().conj(ext).unwrap());
        prop_assert!(hdual.is_subcode_of(&conj).unwrap() && conj.is_subcode_of(&hdual).unwrap());
        let gram = common::hermitian_gram(ext, code.gen());
        prop_assert_eq!(code.hermitian_gram(ext).unwrap().to_rows(), gram);
    }
}

fn small_family_params() -> Vec<FamilyParams> {
    let mut all = Vec::new();
    for family in 1..=4u8 {
        for q in [3, 4, 5, 7, 8, 9] {
            all.extend(FamilyParams::all(family, q));
        }
    }
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_outputs_keep_their_invariants(idx in any::<prop::sample::Index>()) {
        let all = small_family_params();
        let params = all[idx.index(all.len())];
        let c = construct(params).unwrap();
        let spec = &c.spec;
        prop_assert_eq!(spec.length() as u32, params.length());
        prop_assert_eq!(spec.k() as u32, params.k);
        prop_assert_eq!(spec.generator().rank(), spec.k());
        let mut alpha = spec.alpha().to_vec();
        alpha.sort_unstable();
        alpha.dedup();
        prop_assert_eq!(alpha.len(), spec.n());
        prop_assert!(common::gram_is_zero(&c.ext, &spec.generator()));
        // Deterministic: a second build is identical.
        let again = construct(params).unwrap();
        prop_assert_eq!(again.spec, c.spec.clone());
        let qp = qgrl_parameters(params).unwrap();
        prop_assert_eq!(qp.n, spec.length());
        prop_assert_eq!(qp.kq + 2 * spec.k(), spec.length());
        prop_assert_eq!(qp.d.is_known(), params.family <= 2);
        if params.family <= 2 {
            prop_assert_eq!(qp.defect().defect.twice, 2);
        }
    }
}
