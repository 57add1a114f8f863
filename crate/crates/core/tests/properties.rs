use proptest::prelude::*;
use rft_walker::contour::{discretize, from_waypoints, world_plates, AnklePose, AnkleVelocity, DesignDomain, FootContour};
use rft_walker::gait::{forward_kinematics, inverse_kinematics, leg_state, synth_gait, LegGeometry, SynthGait};
use rft_walker::geom::{wrap_half_pi, Rotation, Vec2};
use rft_walker::stress_map::{symmetry_reduce, StressMap};
use std::f64::consts::{FRAC_PI_2, PI};

const LEGS: LegGeometry = LegGeometry {
    thigh: 0.47,
    shank: 0.45,
};

fn same_line(a: f64, b: f64) -> bool {
    let d = wrap_half_pi(a - b);
    d.abs() < 1e-9 || (d.abs() - PI).abs() < 1e-9
}

proptest! {
    #[test]
    fn ik_reproduces_reachable_targets(d in 0.02f64..=0.92, phi in -PI..PI) {
        let target = Vec2::new(d * phi.cos(), d * phi.sin());
        let (t1, t2) = inverse_kinematics(target, &LEGS).unwrap();
        prop_assert!(t2 >= 0.0);
        prop_assert!((forward_kinematics(t1, t2, &LEGS) - target).norm() < 1e-9);
    }

    #[test]
    fn ankle_frame_identity_holds(x in -0.4f64..0.4, z in -0.9f64..-0.5, vx in -1.0f64..1.0, vz in -1.0f64..1.0) {
        let ankle = Vec2::new(x, z);
        prop_assume!(LEGS.reachable(ankle));
        let s = leg_state(ankle, Vec2::new(vx, vz), &LEGS).unwrap();
        prop_assert!((s.theta_a - (FRAC_PI_2 - (s.theta1 + s.theta2))).abs() < 1e-15);
        prop_assert!((s.omega_a - (s.omega1 + s.omega2)).abs() < 1e-12);
    }

    #[test]
    fn symmetry_reduction_is_idempotent(beta in -10.0f64..10.0, gamma in -10.0f64..10.0) {
        let r = symmetry_reduce(beta, gamma);
        prop_assert!(r.beta > -FRAC_PI_2 && r.beta <= FRAC_PI_2);
        prop_assert!(r.gamma >= -FRAC_PI_2 - 1e-12 && r.gamma <= FRAC_PI_2 + 1e-12);
        let again = symmetry_reduce(r.beta, r.gamma);
        prop_assert!((again.beta - r.beta).abs() < 1e-12);
        prop_assert!((again.gamma - r.gamma).abs() < 1e-12);
        prop_assert_eq!(again.sign_x, 1.0);
    }

    #[test]
    fn zeta_scales_queries(beta in -3.0f64..3.0, gamma in -3.0f64..3.0, zeta in 0.01f64..20.0) {
        let base = StressMap::generic();
        let scaled = base.clone().with_zeta(zeta).unwrap();
        let (ax, az) = base.query(beta, gamma);
        let (sx, sz) = scaled.query(beta, gamma);
        prop_assert_eq!(sx, ax * zeta);
        prop_assert_eq!(sz, az * zeta);
    }

    #[test]
    fn world_plates_commute_with_rigid_motion(
        k in proptest::collection::vec(1u32..=10, 11),
        px in -1.0f64..1.0,
        pz in -1.0f64..1.0,
        angle in -PI..PI,
    ) {
        let contour = from_waypoints(&k, &DesignDomain::default()).unwrap();
        let pose = AnklePose { position: Vec2::new(px, pz), rotation: angle };
        let moved_first = world_plates(&discretize(&contour, 50).unwrap(), pose, AnkleVelocity::default());

        let rot = Rotation::new(angle);
        let moved = FootContour::new(
            "moved",
            contour.width,
            Vec2::ZERO,
            contour.vertices.iter().map(|v| pose.position + rot.apply(*v - contour.ankle_offset)).collect(),
        ).unwrap();
        let discretized_first = discretize(&moved, 50).unwrap();
        for (a, b) in moved_first.iter().zip(&discretized_first.plates) {
            prop_assert!((a.center - b.center).norm() < 1e-9);
            prop_assert!(same_line(a.beta, b.beta), "beta {} vs {}", a.beta, b.beta);
        }
    }

    #[test]
    fn waypoint_contours_stay_in_band(k in proptest::collection::vec(1u32..=10, 11)) {
        let d = DesignDomain::default();
        let c = from_waypoints(&k, &d).unwrap();
        for v in &c.vertices {
            prop_assert!(v.x >= -d.half_length - 1e-12 && v.x <= d.half_length + 1e-12);
            prop_assert!(v.z >= -d.half_height - 1e-12 && v.z <= 1e-12);
        }
        let back = FootContour::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn plate_lengths_are_equal(k in proptest::collection::vec(1u32..=10, 11), n in 1usize..300) {
        let c = from_waypoints(&k, &DesignDomain::default()).unwrap();
        let p = discretize(&c, n).unwrap();
        prop_assert_eq!(p.len(), n);
        prop_assert!((p.arc_length * n as f64 - c.length()).abs() <= 1e-6 * c.length());
        for plate in &p.plates {
            prop_assert!(plate.beta > -FRAC_PI_2 && plate.beta <= FRAC_PI_2);
        }
    }
}

#[test]
fn synth_positions_are_continuous() {
    let gait = synth_gait(&SynthGait::default(), &LEGS).unwrap();
    let dt = 1e-5;
    let grid: Vec<f64> = (0..=18_000).map(|i| i as f64 * 1e-4).collect();
    let vmax = grid
        .iter()
        .flat_map(|&t| gait.sample(t).unwrap())
        .map(|s| s.velocity.norm())
        .fold(0.0, f64::max);
    let mut t = 0.0;
    while t + dt <= gait.end() {
        let a = gait.sample(t).unwrap();
        let b = gait.sample(t + dt).unwrap();
        for f in 0..2 {
            let jump = (b[f].position - a[f].position).norm();
            assert!(jump <= vmax * dt * (1.0 + 1e-3), "jump {jump} at t={t}");
        }
        t += 7.3e-4;
    }
}
