use proptest::prelude::*;

use ppsim::dsl::{
    compile, parse, run, ChannelEvent, ChannelSequence, HardTarget, PulseProgram, Sel, Statement,
    UnitaryRef,
};
use ppsim::spin::{thermal_deviation, Axis, CrushMode};
use ppsim::SpinSystem;

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

fn angle() -> impl Strategy<Value = f64> {
    prop_oneof![(-720.0..720.0f64), (-720i32..720).prop_map(f64::from)]
}

/// Single-quantum pairs of a 2-spin system.
fn sq_pair() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![
        Just((1, 2)),
        Just((3, 4)),
        Just((1, 3)),
        Just((2, 4)),
        Just((2, 1)),
        Just((4, 3)),
        Just((3, 1)),
        Just((4, 2)),
    ]
}

fn sel() -> impl Strategy<Value = Sel> {
    (sq_pair(), axis(), angle()).prop_map(|((from, to), axis, angle_deg)| Sel {
        from,
        to,
        axis,
        angle_deg,
    })
}

fn statement() -> impl Strategy<Value = Statement> {
    prop_oneof![
        prop::collection::vec(sel(), 1..4).prop_map(|mut v| {
            let mut seen = Vec::new();
            v.retain(|s| {
                let key = (s.from.min(s.to), s.from.max(s.to));
                let fresh = !seen.contains(&key);
                seen.push(key);
                fresh
            });
            Statement::Block(v)
        }),
        (
            prop_oneof![
                Just(HardTarget::All),
                (1usize..=2).prop_map(HardTarget::Spin)
            ],
            axis(),
            angle()
        )
            .prop_map(|(target, axis, angle_deg)| Statement::Hard {
                target,
                axis,
                angle_deg
            }),
        prop_oneof![
            Just(CrushMode::AllOffDiagonal),
            Just(CrushMode::CoherenceOrder)
        ]
        .prop_map(Statement::Crush),
        prop_oneof![
            Just(UnitaryRef::Walsh),
            Just(UnitaryRef::Mixing),
            Just(UnitaryRef::Oracle("V1&!V2".into())),
        ]
        .prop_map(Statement::Unitary),
    ]
}

fn program() -> impl Strategy<Value = PulseProgram> {
    prop::collection::vec(statement(), 0..8).prop_map(PulseProgram::new)
}

fn chloroform() -> SpinSystem {
    SpinSystem::new(vec![1.4048, 5.5857]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn print_then_parse_is_identity(p in program()) {
        let text = p.to_string();
        prop_assert_eq!(parse(&text).unwrap(), p);
    }

    #[test]
    fn compilation_is_deterministic(p in program()) {
        let a = compile(&p, &chloroform()).unwrap();
        let b = compile(&p, &chloroform()).unwrap();
        prop_assert_eq!(&a, &b);
        for ev in &a.events {
            if let ChannelEvent::Unitary(u) = ev {
                prop_assert!(u.unitarity_error() < 1e-12);
                prop_assert_eq!(u.dim(), 4);
            }
        }
    }

    #[test]
    fn runs_compose(p1 in program(), p2 in program()) {
        let sys = chloroform();
        let rho = thermal_deviation(&sys);
        let joined = run(&compile(&p1.concat(&p2), &sys).unwrap(), &rho).unwrap();
        let s1 = compile(&p1, &sys).unwrap();
        let s2 = compile(&p2, &sys).unwrap();
        let staged = run(&s2, &run(&s1, &rho).unwrap()).unwrap();
        let fused = run(&s1.concat(&s2).unwrap(), &rho).unwrap();
        prop_assert!(joined.combine(1.0, &staged, -1.0).unwrap().max_abs() < 1e-9);
        prop_assert_eq!(joined, fused);
    }

    #[test]
    fn accepted_sel_flips_one_bit(m in 1usize..=8, k in 1usize..=8, a in angle()) {
        prop_assume!(m != k);
        let sys = SpinSystem::new(vec![1.0, 1.0, 1.0]).unwrap();
        let p = parse(&format!("sel {m} {k} x {a}")).unwrap();
        let accepted = compile(&p, &sys).is_ok();
        prop_assert_eq!(accepted, ((m - 1) ^ (k - 1)).count_ones() == 1);
    }
}

#[test]
fn empty_sequence_concat() {
    let s = ChannelSequence::<f64> {
        n_spins: 2,
        events: vec![],
    };
    assert_eq!(s.concat(&s).unwrap().events.len(), 0);
}
