//! Exposure of one weakness class, then the fewest exploits that reach a
//! coverage target over a set of deployment stacks.

use vuln_factory::abundance::{self, Coverage, DeploymentProfile, ExposureInputs};

fn main() -> vuln_factory::Result<()> {
    let inputs = ExposureInputs {
        abundance: 0.05,
        deployment: 0.001,
        p_exploit: 1.0,
    };
    println!("exposure A*D*P = {:e}", abundance::exposure(&inputs)?);
    println!("KEV ratio 1484/200000 = {:.5}", abundance::kev_ratio(1484, 200_000)?);

    let profile = DeploymentProfile::new(
        [("linux-web", 0.40), ("windows-desktop", 0.25), ("android", 0.15), ("iot", 0.08), ("mainframe", 0.02)]
            .map(|(k, v)| (k.to_string(), v)),
    )?;
    for target in [0.5, 0.8, 0.9, 0.95] {
        match abundance::min_exploits_for_coverage(&profile, target)? {
            Coverage::Reachable { count, selected, covered } => {
                println!("target {target}: {count} exploits {selected:?} cover {covered:.2}")
            }
            Coverage::Unreachable { total } => println!("target {target}: unreachable, shares total {total:.2}"),
        }
    }
    Ok(())
}
