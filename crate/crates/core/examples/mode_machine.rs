//! Steps the supervisor through a scripted contact-force profile and prints
//! every mode change and the policy it selects.

use tiltperch::supervisor::Supervisor;
use tiltperch::{SwitchConfig, SwitchingLaw};

fn main() {
    for law in [
        SwitchingLaw::WithTransitions,
        SwitchingLaw::WithoutTransitions,
    ] {
        println!("== {law:?}");
        let mut sup = Supervisor::new(law, SwitchConfig::default());
        let mut mode = sup.mode();
        for k in 0..=600 {
            let t = k as f64 * 0.01;
            // magnets pull in from t = 1.5 s and peel off from t = 4.5 s
            let lambda = if (1.5..4.5).contains(&t) {
                2.5
            } else if t >= 4.5 {
                -2.0
            } else {
                0.0
            };
            let s_f2p = k == 100;
            let s_p2f = k == 400;
            let st = sup.tick(lambda, s_f2p, s_p2f, t);
            if st.mode != mode {
                println!(
                    "t={t:.2}  {mode} -> {}  perch target {}  {:?}",
                    st.mode,
                    st.perch_target,
                    sup.policy()
                );
                mode = st.mode;
            }
        }
    }
}
