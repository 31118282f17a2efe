// Critical current density across the oxidation dose series, and the normal
// resistance to aim for on a target junction.

use trenchjj::junction::{critical_current_density, rn_for_target, JunctionElectrical};
use trenchjj::units::DEFAULT_GAP_UEV;

fn main() {
    let doses = [("1 Torr, 1 min", 199.1), ("1 Torr, 5 min", 391.8), ("2 Torr, 5 min", 1381.6), ("10 Torr, 5 min", 3114.3)];
    for (dose, rna) in doses {
        let jc = critical_current_density(rna, DEFAULT_GAP_UEV).unwrap();
        println!("{dose:>15}: RnA = {rna:7.1} Ω·µm², Jc = {jc:6.1} A/cm²");
    }

    let j = JunctionElectrical::from_measurement(6600.0, 0.0844, DEFAULT_GAP_UEV).unwrap();
    println!("6.6 kΩ on 0.0844 µm²: Ic = {:.1} nA, Jc = {:.1} A/cm²", j.ic_na, j.jc_a_cm2);

    let rn = rn_for_target(72.2, 0.0844, DEFAULT_GAP_UEV).unwrap();
    println!("for Jc = 72.2 A/cm² on the same area aim for Rn = {rn:.0} Ω");
}
