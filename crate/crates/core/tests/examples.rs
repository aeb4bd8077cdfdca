//! Worked examples checked value by value. Elements of GF(9) and GF(25) are
//! written `a + b w` and indexed `a + p b`.

mod common;

use grl_core::code::{min_distance, min_distance_exact, Distance, SearchOptions};
use grl_core::families::{
    construct, construct_family1, construct_family2, ConstructionTrace, FamilyParams,
};
use grl_core::field::{Elem, QuadraticExtension};
use grl_core::grl::{distinct_vectors, gamma_set, hermitian_sums, nmds_criterion_s2, omega_set};
use grl_core::linalg::Matrix;
use grl_core::quantum::{css_from_hermitian_so, qgrl_parameters, QuantumParams};
use grl_core::reference::{example, tower_gf81, TOWER_GENERATOR};

fn block_gram(ext: &QuadraticExtension, a: &Matrix) -> Vec<Vec<Elem>> {
    a.mul(&a.conj_transpose(ext).unwrap()).unwrap().to_rows()
}

#[test]
fn seven_three_four_over_gf9() {
    let ex = example(2).unwrap();
    let ext = ex.ext.clone().unwrap();
    let spec = &ex.spec;
    let norms: Vec<Elem> = spec.v().iter().map(|&x| ext.norm(x)).collect();
    assert_eq!(norms, [1, 1, 2, 1, 1]);
    assert_eq!(block_gram(&ext, spec.a()), [[1, 2], [2, 0]]);
    let expected = [(0, 0), (3, 0), (6, 0), (4, 2), (7, 1), (8, 0)];
    let lib = hermitian_sums(&ext, spec.alpha(), spec.v(), &expected.map(|e| e.0));
    for (t, value) in expected {
        assert_eq!(
            common::hermitian_sum(&ext, spec.alpha(), spec.v(), t),
            value,
            "S_{t}"
        );
        assert_eq!(lib.get(t), Some(value));
    }
    // 2w = w (2w + (2 + w)) puts the needed ratio among the 2-subset sums.
    let f = ext.ext();
    assert_eq!(f.mul(3, f.add(6, 5)), 6);
    assert!(nmds_criterion_s2(spec).unwrap().nmds);
    assert_eq!(common::brute_distance(&spec.generator()), 4);
}

#[test]
fn seven_three_four_gives_a_distance_three_quantum_code() {
    let ex = example(2).unwrap();
    let ext = ex.ext.clone().unwrap();
    let code = ex.spec.code();
    let q = css_from_hermitian_so(
        &code,
        &ext,
        Distance::exact(3),
        Some(Distance::exact(4)),
        SearchOptions::default(),
    )
    .unwrap();
    // Frozen from a scan of all 9^7 words orthogonal to the code and outside it.
    assert_eq!(q, QuantumParams::new(7, 1, Distance::exact(3), 3).unwrap());
}

#[test]
fn six_three_three_over_gf9() {
    let ex = example(3).unwrap();
    let ext = ex.ext.clone().unwrap();
    let spec = &ex.spec;
    let f = ext.ext();
    assert_eq!(
        block_gram(&ext, spec.a()),
        [[2, 8, 6], [5, 0, 0], [3, 0, 2]]
    );
    for (t, value) in [(0, 1), (3, 4), (6, 3), (4, 0), (7, 0), (8, 1)] {
        assert_eq!(
            common::hermitian_sum(&ext, spec.alpha(), spec.v(), t),
            value,
            "S_{t}"
        );
    }
    let mut omega1 = vec![[1, 3, 2], [1, 7, 3], [1, 2, 1]];
    omega1.sort_unstable();
    assert_eq!(
        distinct_vectors(&omega_set(f, spec.alpha(), 1).unwrap()),
        omega1
    );
    let gamma2 = gamma_set(f, spec.alpha(), 2).unwrap();
    let mut listed = vec![[4, 2, 1], [6, 7, 1], [5, 3, 1]];
    listed.sort_unstable();
    assert_eq!(distinct_vectors(&gamma2), listed);

    let cols: Vec<Vec<Elem>> = (0..3).map(|c| spec.a().column(c)).collect();
    let dot = |a: &[Elem], b: &[Elem]| f.sum(a.iter().zip(b).map(|(&x, &y)| f.mul(x, y)));
    let det = Matrix::from_rows(
        f.clone(),
        &[cols[0].clone(), cols[1].clone(), vec![1, 2, 1]],
    )
    .unwrap()
    .det()
    .unwrap();
    assert_eq!(det, 0);
    let table = [
        ([4, 2, 1], [2, 2, 0]),
        ([6, 7, 1], [2, 1, 4]),
        ([5, 3, 1], [7, 5, 2]),
    ];
    for (gamma, row) in table {
        let got: Vec<Elem> = cols.iter().map(|b| dot(b, &gamma)).collect();
        assert_eq!(got, row, "gamma {gamma:?}");
        assert!(got.iter().filter(|&&x| x == 0).count() <= 1);
    }
}

#[test]
fn norm_one_coset_fixture_over_gf25() {
    let ex = example(4).unwrap();
    let ext = ex.ext.clone().unwrap();
    let f = ext.ext();
    // The first six points form the norm-one subgroup and the rest are its
    // w- and 2w-multiples. The subgroup contains 2 + w, not 2 + 2w.
    let unit_group = &ex.spec.alpha()[..6];
    assert_eq!(unit_group, [1, 7, 22, 8, 23, 4]);
    assert!(unit_group.iter().all(|&x| ext.norm(x) == 1));
    assert_ne!(ext.norm(12), 1);
    for (j, leader) in [(1, 5), (2, 10)] {
        let coset: Vec<Elem> = unit_group.iter().map(|&x| f.mul(leader, x)).collect();
        assert_eq!(&ex.spec.alpha()[6 * j..6 * j + 6], coset.as_slice());
    }
    // The stated value 1 + w comes from the leader w; the leader 2w gives
    // 2 + 2w instead.
    let xi = 8;
    let partial = f.sum([1, xi, f.mul(xi, xi)]);
    let theta = f.mul(5, partial);
    assert_eq!(theta, 6);
    assert_eq!(f.mul(10, partial), 12);
    let sigma = 1;
    let denom = f.add(sigma, ext.norm(theta));
    let rho = f.neg(f.div(sigma, denom).unwrap());
    assert_eq!(rho, 1);
    assert_eq!(f.neg(f.div(f.mul(sigma, sigma), denom).unwrap()), 1);
    assert_eq!(f.neg(f.mul(rho, ext.conj(theta))), 9);
    assert_eq!(ex.spec.a().to_rows(), [[1, 9], [6, 1]]);
}

#[test]
fn family1_reproduces_the_gf25_block() {
    let c = construct_family1(5, 3, 4).unwrap();
    let ConstructionTrace::NormCosetsS2(t) = &c.trace else {
        panic!("wrong trace kind")
    };
    assert_eq!(t.coset_norms, [1, 2, 3]);
    assert_eq!(t.norm_sum, 1);
    assert_eq!((t.theta, t.rho), (6, 1));
    assert_eq!(t.block, [[1, 9], [6, 1]]);
    assert_eq!(c.spec.length(), 20);
    let d = min_distance_exact(&c.spec.code(), SearchOptions::default()).unwrap();
    assert_eq!(d, 16);
}

#[test]
fn family2_reproduces_the_ten_three_seven_trace() {
    let c = construct_family2(5, 2, 3).unwrap();
    let ConstructionTrace::UnitCosetsS2(t) = &c.trace else {
        panic!("wrong trace kind")
    };
    assert_eq!(t.representatives, [1, 5]);
    assert_eq!(t.coset_weights, [1, 1]);
    // mu = 1 + 3z, theta = 1, tau = 2, rho = 2, a = z, d = 1 + z.
    assert_eq!((t.mu, t.theta, t.tau, t.rho, t.a, t.d), (16, 1, 2, 2, 5, 6));
    assert_eq!(t.block, [[5, 21], [5, 6]]);
    let ex = example(5).unwrap();
    assert_eq!(c.spec.a(), ex.spec.a());
    assert_eq!(c.spec.alpha(), ex.spec.alpha());
    let f = c.ext.ext();
    assert_eq!(f.add(f.pow(1, 11), f.pow(5, 11)), 16);
}

#[test]
fn length_62_identities_over_gf81() {
    let ext = tower_gf81().unwrap();
    let f = ext.ext();
    let g = |e: u64| f.pow(TOWER_GENERATOR, e);
    let xi = g(8);
    assert_eq!(f.mult_order(xi), Some(10));
    // The square root of -1 in GF(9) that makes g - alpha square to alpha + 1.
    let minus_one = f.neg(1);
    let roots: Vec<Elem> = ext
        .subfield()
        .iter()
        .copied()
        .filter(|&x| f.mul(x, x) == minus_one)
        .collect();
    let alpha: Vec<Elem> = roots
        .into_iter()
        .filter(|&x| {
            let w = f.sub(TOWER_GENERATOR, x);
            f.mul(w, w) == f.add(x, 1)
        })
        .collect();
    assert_eq!(alpha.len(), 1);
    let alpha = alpha[0];
    let lin = |a: u32, b: u32| f.add(f.from_int(a as i64), f.mul(f.from_int(b as i64), alpha));
    let c: Vec<Elem> = (0..6).map(|j| ext.norm(g(j))).collect();
    assert_eq!(
        c,
        [
            lin(1, 0),
            lin(1, 2),
            lin(0, 1),
            lin(1, 1),
            lin(2, 0),
            lin(2, 1)
        ]
    );
    let sigma = f.sum(c.iter().copied());
    assert_eq!(sigma, g(10));
    let weights = [g(4), g(2), g(7), g(2), g(3), g(3)];
    for j in 0..6 {
        let dj = f.product((0..6).filter(|&l| l != j).map(|l| f.sub(c[j], c[l])));
        assert_eq!(ext.norm(weights[j]), f.div(c[j], dj).unwrap(), "coset {j}");
    }
    let theta = f.sum((0..5).map(|i| f.pow(xi, i)));
    assert_eq!(theta, g(26));
    let denom = f.add(sigma, ext.norm(theta));
    // Sigma = g^10 and rho = g^50 force this to be -Sigma/rho = 1; the
    // printed value 1 + alpha matches neither it nor Sigma + theta.
    assert_eq!(denom, 1);
    assert_ne!(f.add(sigma, theta), lin(1, 1));
    let rho = f.neg(f.div(sigma, denom).unwrap());
    assert_eq!(rho, g(50));
    let (a, d) = (g(5), g(6));
    assert_eq!(ext.norm(a), rho);
    assert_eq!(
        ext.norm(d),
        f.neg(f.div(f.mul(sigma, sigma), denom).unwrap())
    );
    assert_eq!(ext.norm(d), g(60));
    assert_eq!(g(60), lin(0, 2));
    let corner = f.neg(f.mul(rho, ext.conj(f.div(theta, d).unwrap())));
    let ex = example(6).unwrap();
    assert_eq!(ex.spec.a().to_rows(), [[a, corner], [f.mul(theta, a), d]]);
}

#[test]
fn small_family_members_by_enumeration() {
    // (family, q, m, k) -> (length, exact distance), frozen from enumeration.
    let cases = [
        ((1, 4, 2, 3), (12, 9)),
        ((2, 5, 6, 3), (26, 23)),
        ((3, 5, 2, 4), (15, 10)),
        ((4, 7, 2, 4), (15, 11)),
    ];
    for ((family, q, m, k), (len, d)) in cases {
        let c = construct(FamilyParams::new(family, q, m, k)).unwrap();
        assert_eq!(c.spec.length(), len);
        assert!(common::gram_is_zero(&c.ext, &c.spec.generator()));
        let got = min_distance(&c.spec.code(), SearchOptions::default()).unwrap();
        assert_eq!(got, d, "family {family} q={q} m={m} k={k}");
        assert!(got >= c.designed_distance());
    }
}

#[test]
fn quantum_rows_from_constructed_codes() {
    let params = FamilyParams::new(2, 13, 2, 3);
    let c = construct(params).unwrap();
    assert!(nmds_criterion_s2(&c.spec).unwrap().nmds);
    let k = c.spec.k();
    let q = css_from_hermitian_so(
        &c.spec.code(),
        &c.ext,
        Distance::certified(k),
        Some(Distance::certified(c.designed_distance())),
        SearchOptions::default(),
    )
    .unwrap();
    assert_eq!(q.to_string(), "[[26,20,3]]_13");
    assert_eq!(qgrl_parameters(params).unwrap(), q);
    assert_eq!(
        qgrl_parameters(FamilyParams::new(2, 5, 2, 3))
            .unwrap()
            .to_string(),
        "[[10,4,3]]_5"
    );
    let row = qgrl_parameters(FamilyParams::new(3, 11, 4, 6)).unwrap();
    assert_eq!(row.to_string(), "[[51,39,>=5]]_11");
    assert_eq!(
        QuantumParams::new(19, 11, Distance::at_least(3), 9)
            .unwrap()
            .defect()
            .defect
            .to_string(),
        "2"
    );
}
