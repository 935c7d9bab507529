//! Regenerates the synthetic `.ulg` fixtures. Run
//! `tools/oracle/reference_dump.py` on the output afterwards.

fn main() -> std::io::Result<()> {
    let dir = skytrace_testkit::data_dir();
    std::fs::create_dir_all(dir.join("synthetic"))?;
    for (name, bytes) in skytrace_testkit::synthetic_fixtures() {
        let path = dir.join(name);
        std::fs::write(&path, bytes)?;
        println!("{}", path.display());
    }
    Ok(())
}
