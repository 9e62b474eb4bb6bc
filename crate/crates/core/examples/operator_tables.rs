// Kernel, image and normal-form complement of the model operator by weight.

use std::error::Error;

use paracr::cmoperator::operator_report;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{:>3} {:>7} {:>6} {:>7}  kernel / complement", "ell", "domain", "image", "kernel");
    for ell in 0..=8 {
        let r = operator_report(ell);
        println!("{:>3} {:>7} {:>6} {:>7}", ell, r.domain_dim, r.image_dim, r.kernel_dim);
        for v in &r.kernel_basis {
            println!("{:28}{v}", "");
        }
        if !r.complement_monomials.is_empty() {
            let c: Vec<String> = r.complement_monomials.iter().map(|m| m.to_string()).collect();
            println!("{:28}keep: {}", "", c.join(", "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
