use homoclinic::gridfn::{integrate_linear, trapezoid, Accuracy};
use homoclinic::{GridFunction, Potential};
use proptest::prelude::*;

fn samples() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, 9..80)
}

proptest! {
    #[test]
    fn linear_integral_is_additive(v in samples(), dx in 0.01..1.0f64, s in 0.0..1.0f64, t in 0.0..1.0f64) {
        let len = (v.len() - 1) as f64 * dx;
        let (lo, hi) = if s < t { (s, t) } else { (t, s) };
        let (a, m, b) = (-0.5, lo * len, hi * len + 0.1);
        let whole = integrate_linear(&v, 0.0, dx, a, b);
        let split = integrate_linear(&v, 0.0, dx, a, m) + integrate_linear(&v, 0.0, dx, m, b);
        let scale = 1.0 + v.iter().map(|x| x.abs()).sum::<f64>() * dx;
        prop_assert!((whole - split).abs() <= 1e-12 * scale);
    }

    #[test]
    fn linear_integral_over_mesh_is_trapezoid(v in samples(), dx in 0.01..1.0f64) {
        let len = (v.len() - 1) as f64 * dx;
        let a = integrate_linear(&v, 0.0, dx, 0.0, len);
        let b = trapezoid(&v, dx);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
    }

    #[test]
    fn csv_round_trip_is_exact(v in samples(), x0 in -5.0..5.0f64) {
        let f = GridFunction::new(x0, 0.125, v).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let g = GridFunction::read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(f.values(), g.values());
    }

    #[test]
    fn sixth_order_stencils_differentiate_cubics(c in prop::array::uniform4(-2.0..2.0f64)) {
        let f = GridFunction::from_fn(-1.0, 1.0, 41, |x| c[0] + x * (c[1] + x * (c[2] + x * c[3]))).unwrap();
        let d1 = f.differentiate_with(1, Accuracy::Sixth).unwrap();
        let d2 = f.differentiate_with(2, Accuracy::Sixth).unwrap();
        for i in 0..f.len() {
            let x = f.x(i);
            prop_assert!((d1.values()[i] - (c[1] + x * (2.0 * c[2] + 3.0 * x * c[3]))).abs() < 1e-9);
            prop_assert!((d2.values()[i] - (2.0 * c[2] + 6.0 * x * c[3])).abs() < 1e-7);
        }
    }

    #[test]
    fn potential_derivatives_agree(u in -1.9..3.0f64) {
        for p in [Potential::Bridge, Potential::SwiftHohenbergShifted] {
            let h = 1e-5;
            let fd1 = (p.v(u + h) - p.v(u - h)) / (2.0 * h);
            let fd2 = (p.v_u(u + h) - p.v_u(u - h)) / (2.0 * h);
            prop_assert!((fd1 - p.v_u(u)).abs() < 1e-6 * (1.0 + p.v_u(u).abs()));
            prop_assert!((fd2 - p.v_uu(u)).abs() < 1e-6 * (1.0 + p.v_uu(u).abs()));
        }
    }
}
