//! Exact rational points on a circle, plus the float fallback for two
//! circles meeting at irrational points.

use chain_census::geometry::{
    certify_separation, circle_circle_intersection, format_rational, int, ratio,
    rational_circle_points, rational_circle_seed, squared_distance, Mode, Point, PointSet,
};

fn main() -> chain_census::Result<()> {
    let r2 = int(25);
    let seed = rational_circle_seed(&r2)?;
    println!(
        "seed on x^2 + y^2 = 25: ({}, {})",
        format_rational(&seed.0),
        format_rational(&seed.1)
    );

    let center = Point::exact(0, vec![int(0), int(0)]);
    let arc = rational_circle_points(&center, &r2, 6, (&int(0), &ratio(1, 2)), Some(seed))?;
    for p in arc.iter() {
        let c = p.exact_coords().unwrap();
        let d2 = squared_distance(&center, p)?;
        println!(
            "({}, {})  d2 = {}",
            format_rational(&c[0]),
            format_rational(&c[1]),
            d2.to_f64()
        );
    }

    let meet = circle_circle_intersection(&[0.0, 0.0], 1.0, &[1.0, 0.0], 2.0)?;
    println!("unit circle meets the circle about (1, 0) of squared radius 2 at {meet:?}");

    // every float pair is either within eps of 1 or far from it
    let a = PointSet::float(2, vec![vec![0.0, 0.0]])?;
    let b = PointSet::float(2, meet.iter().map(|p| p.to_vec()).collect())?;
    let report = certify_separation(&a, &b, &int(1), Mode::tolerant());
    println!("separation certificate stable: {}", report.is_stable());
    Ok(())
}
