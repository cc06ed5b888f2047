//! Saves an instance to JSON, reloads it and checks that nothing moved.

use cobi::generator::{from_hex, generate, load, save, to_hex, ConstraintRecipe, GeneratorConfig, InstanceDocument};
use cobi::linalg::Point;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = GeneratorConfig::new(3, 99);
    cfg.constraints = ConstraintRecipe::parse_list("quadratic,multipeak:lq")?;
    let prob = generate(&cfg)?;
    let text = save(&prob).with_config(cfg).to_json();

    let doc = InstanceDocument::from_json(&text)?;
    let back = load(&doc)?;
    assert_eq!(doc.to_json(), text, "save(load(save(p))) differs from save(p)");

    let x = Point::from_vec(vec![0.1, -0.3, 0.7]);
    let (a, b) = (prob.evaluate(&x)?, back.evaluate(&x)?);
    assert_eq!(a, b);
    println!("round trip ok: {} bytes, f(x) = ({}, {})", text.len(), to_hex(a.f.f1), to_hex(a.f.f2));
    println!("0.1 is stored as {} and reads back as {}", to_hex(0.1), from_hex(&to_hex(0.1)).ok_or("bad hex")?);
    Ok(())
}
