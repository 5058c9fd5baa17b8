use dtigra::seqspace::{bregman_fp, bregman_fq_dual, duality_map_p, lp_norm};
use dtigra::{CoefVec, DualVec, Exponent};
use proptest::prelude::*;

fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, n)
}

proptest! {
    #[test]
    fn bregman_upper_bound(p in 1.05f64..2.0, x in vec_strategy(8), z in vec_strategy(8)) {
        let e = Exponent::new(p).unwrap();
        let x = CoefVec::new(x).unwrap();
        let z = CoefVec::new(z).unwrap();
        let d = bregman_fp(&z, &x, e).unwrap();
        let bound = 2f64.powf(2.0 - p) * lp_norm(&x.sub(&z).unwrap(), e).powf(p);
        prop_assert!(d <= bound * (1.0 + 1e-12) + 1e-12, "{d} > {bound}");
        prop_assert!(d >= -1e-12);
    }

    #[test]
    fn dual_bregman_lower_bound(p in 1.05f64..1.95, a in vec_strategy(8), b in vec_strategy(8)) {
        let e = Exponent::new(p).unwrap();
        let a = DualVec::new(a).unwrap();
        let b = DualVec::new(b).unwrap();
        let diff = a.add_scaled(-1.0, &b).unwrap().dual_norm(e);
        prop_assume!(diff > 1e-2);
        let q = e.q();
        let d = bregman_fq_dual(&a, &b, e).unwrap();
        let c = 2f64.powf(2.0 - q) / (2.0 * q);
        prop_assert!(d >= c * diff.powf(q) * (1.0 - 1e-9), "{d} < {}", c * diff.powf(q));
    }

    #[test]
    fn bregman_cross_identity(p in 1.05f64..2.0, x in vec_strategy(6), z in vec_strategy(6)) {
        let e = Exponent::new(p).unwrap();
        let x = CoefVec::new(x).unwrap();
        let z = CoefVec::new(z).unwrap();
        let d = bregman_fp(&z, &x, e).unwrap();
        let dq = bregman_fq_dual(&duality_map_p(&x, e), &duality_map_p(&z, e), e).unwrap();
        prop_assert!((d - dq).abs() <= 1e-9 * (1.0 + d.abs()));
    }
}
