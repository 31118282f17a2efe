// Energies, quality factors and the thermal-photon dephasing bound for the
// five qubits of the first cooldown.

use trenchjj::transmon::{RateConvention, TransmonParams};

fn main() {
    // name, f_qubit MHz, α MHz, χ kHz, κ kHz, f_res GHz, T1 µs, T2E µs
    let qubits = [
        ("Q-5", 2661.0, 168.0, -90.0, 181.0, 6.62, 61.24, 39.08),
        ("Q-7", 2714.2, 190.0, -110.0, 206.0, 6.73, 66.42, 76.06),
        ("Q-10", 2838.1, 198.0, -50.0, 204.0, 6.80, 14.07, 24.35),
        ("Q-20", 2811.6, 190.5, -70.0, 667.0, 6.65, 184.79, 207.15),
        ("Q-150", 2828.0, 177.0, -70.0, 278.0, 6.78, 141.18, 225.75),
    ];
    println!("qubit   EJ/EC      Q1        Q2E       Qphi     Qphi(photons)");
    for (name, f, a, chi, kappa, fr, t1, t2e) in qubits {
        let p = TransmonParams::derive(f, a, chi, kappa, fr, 0.01, Some((t1, t2e)), RateConvention::OrdinaryFrequency)
            .unwrap();
        let c = p.coherence.unwrap();
        println!(
            "{name:<6} {:6.2}  {:9.3e} {:9.3e} {:9.3e} {:9.3e}",
            p.energies.ej_ec_ratio, c.q1, c.q2e, c.q_phi, p.q_phi_photon
        );
    }
}
