// Junction overlap for the ±49° double-angle deposition used on the qubit chip,
// and how much trench width the shadows eat.

use trenchjj::geometry::{
    effective_thickness, junction_geometry, min_width_for_overlap, overlap_vs_rotation,
    DepositionStep, Segment, TrenchProfile,
};

fn main() {
    let bottom = DepositionStep::new(49.0, 30.5).unwrap();
    let top = DepositionStep::new(-49.0, 123.0).unwrap();
    println!(
        "film thickness on the floor: {:.1} nm / {:.1} nm",
        effective_thickness(30.5, 49.0).unwrap(),
        effective_thickness(123.0, 49.0).unwrap()
    );

    let w0 = min_width_for_overlap(1100.0, 49.0, -49.0).unwrap();
    println!("a 1.1 µm deep trench needs more than {w0:.0} nm of width");

    // narrow leads either side of a 180 nm long wide section
    let trench = TrenchProfile::new(
        1100.0,
        87.0,
        vec![
            Segment { length_nm: 2000.0, width_nm: 2000.0 },
            Segment { length_nm: 180.0, width_nm: 3000.0 },
            Segment { length_nm: 2000.0, width_nm: 2000.0 },
        ],
    )
    .unwrap();
    let g = junction_geometry(&trench, &bottom, &top).unwrap();
    println!(
        "junction {:.0} nm × {:.0} nm = {:.4} µm²",
        g.overlap_width_nm, g.overlap_length_nm, g.area_um2
    );

    for rot in [0.0, 2.0, 5.0, 10.0] {
        let r = overlap_vs_rotation(&trench, &bottom, &top, rot).unwrap();
        println!(
            "chip rotated {rot:>4}°: width {:.1} nm, along-trench shift {:.1} nm",
            r.geometry.overlap_width_nm, r.along_shift_nm[0]
        );
    }
}
