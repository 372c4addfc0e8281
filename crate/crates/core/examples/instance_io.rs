//! Save a generated instance to TOML and load it back bit for bit.
//!
//! Instance files can be referenced from experiment configs with
//! `kind = "file"`.
//!
//! ```bash
//! cargo run --example instance_io
//! ```

use splitkit::problems::{make_affine_instance, make_saddle_instance, Instance};

fn main() -> splitkit::Result<()> {
    let dir = std::env::temp_dir().join("splitkit-instance-io");
    std::fs::create_dir_all(&dir)?;

    let affine = Instance::Affine(make_affine_instance(6, 42, 0.8)?);
    let path = dir.join("affine-d6.toml");
    affine.save(&path)?;
    let loaded = Instance::load(&path)?;
    match (&affine, &loaded) {
        (Instance::Affine(a), Instance::Affine(b)) => {
            println!("{}: round trip exact = {}", path.display(), a == b);
            let xs: Vec<String> = b.x_star.iter().map(|v| format!("{v:.6}")).collect();
            println!("x* = [{}]", xs.join(", "));
        }
        _ => unreachable!(),
    }

    let saddle = Instance::Saddle(make_saddle_instance(3, 4, 7, 0.5, 1.0)?);
    let text = saddle.to_toml()?;
    println!("\n{}", text.lines().take(8).collect::<Vec<_>>().join("\n"));
    let back = Instance::from_toml(&text)?;
    println!("...\nsaddle kind after reload: {}", back.kind());
    Ok(())
}
