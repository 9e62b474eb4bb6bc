// Driving the command-line interface in-process and reading its JSON.

use std::error::Error;

use paracr::cli::run;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let calls: &[&[&str]] = &[
        &["paracr", "tables", "--ell", "3"],
        &["paracr", "normalize", "--order", "6", "--expr", "a + b x + x^3"],
        &["paracr", "check-ode-normal", "--expr", "x p^2"],
        &["paracr", "type", "--expr", "a + b^2 x^3 + a x"],
    ];
    for args in calls {
        let out = run(args.iter().copied());
        println!("$ {}\n{}", args.join(" "), out.stdout);
    }
    let out = run(["paracr", "surf2ode", "--expr", "a + b x + 1/2 b^2 x^2", "--order", "6", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout)?;
    println!("surf2ode ode: {}", v["ode"]["text"]);
    println!("phi divisible by p^2: {}", v["phi_divisible_by_p2"]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
