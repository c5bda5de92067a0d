use proptest::prelude::*;

use mhfem::assembly::CoefficientField;
use mhfem::fourier::{
    FourierSettings, ProblemSpec, SeparableSource, SeparableTerm, SpatialFn, TimeFn,
};
use mhfem::pipeline::{solve_level, SolveOptions};

fn time_fn(kind: u8, j: u32) -> TimeFn {
    match kind {
        0 => TimeFn::One,
        1 => TimeFn::Cos(j),
        _ => TimeFn::Sin(j),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn majorant_bounds_the_error(
        sigma in 0.5f64..2.0,
        nu in 0.5f64..2.0,
        omega in prop::sample::select(vec![0.5, 1.0, 2.0]),
        truncation in 0usize..3,
        m in 1u32..3,
        kind in 0u8..3,
        j in 1u32..4,
        n in prop::sample::select(vec![3usize, 9]),
    ) {
        let exact = SeparableSource::new(vec![
            SeparableTerm { space: SpatialFn::bubble(), time: TimeFn::One },
            SeparableTerm { space: SpatialFn::sinsin(m, 1), time: time_fn(kind, j) },
        ]);
        let source = SeparableSource::derive_from_solution(&exact, sigma, nu, omega).unwrap();
        let p = ProblemSpec {
            name: "prop".into(),
            omega,
            truncation,
            sigma: CoefficientField::constant(sigma).unwrap(),
            nu: CoefficientField::constant(nu).unwrap(),
            source,
            exact: Some(exact),
        };
        let opts = SolveOptions {
            fourier: FourierSettings { samples: 1 << 10, k_max: 16 },
            ..SolveOptions::default()
        };
        let r = solve_level(&p, n, &opts).unwrap();
        for (what, bound, err) in r.bound_checks() {
            prop_assert!(bound >= err, "{what}: {bound} < {err}");
        }
    }
}
