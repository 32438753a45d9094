use std::time::Instant;
use seldark::drive::{darkening_drive, ConditionMode, Envelope, Polarity, TargetQubit};
use seldark::gate::{calibrate_gate, CorrectionMode};
use seldark::system::SystemSpec;

fn main() {
    let two = SystemSpec::two_level(6.0, 5.0, 0.1).unwrap();
    for a1 in [0.016, 0.05, 0.112, 0.14] {
        let drive = darkening_drive(&two, TargetQubit::Q2, Polarity::Cnot1, ConditionMode::Exact, a1, Envelope::HalfSine).unwrap();
        let t0 = Instant::now();
        let r = calibrate_gate(&two, &drive, CorrectionMode::Analytic, 7).unwrap();
        println!(
            "2lv analytic a1={a1:.3}: J_eff/J = {:.4}, err = {:.3e}, t = {:.2} ns, wall {:?}",
            r.j_eff / two.j,
            1.0 - r.fidelity,
            r.t_gate,
            t0.elapsed()
        );
    }

    let three = SystemSpec::three_level(6.0, 5.0, 0.025, -0.2, -0.18).unwrap();
    for a1 in [0.64, 0.16] {
        let drive = darkening_drive(&three, TargetQubit::Q2, Polarity::Cnot1, ConditionMode::Exact, a1, Envelope::HalfSine).unwrap();
        let t0 = Instant::now();
        let r = calibrate_gate(&three, &drive, CorrectionMode::Phase, 7).unwrap();
        println!(
            "3lv phase a1={a1:.3}: J_eff/|d1| = {:.4}, err = {:.3e}, t = {:.2} ns, wall {:?}",
            r.j_eff / 0.2,
            1.0 - r.fidelity,
            r.t_gate,
            t0.elapsed()
        );
    }
}
