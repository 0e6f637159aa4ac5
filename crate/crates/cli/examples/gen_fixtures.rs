//! Regenerates the bundled b-files from the exact oracles:
//! `cargo run -p sinelcm-cli --example gen_fixtures`.

use std::path::Path;

use sinelcm_cli::bfile::render;
use sinelcm_cli::oeis::Sequence;

/// Both files cover every index up to this one.
const LAST: u64 = 200;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for seq in [Sequence::A003418, Sequence::A048671] {
        let first = seq.offset();
        let text = render(
            &format!("{}: n = {first}..{LAST}", seq.id()),
            (first..=LAST).map(|n| (n, seq.oracle(n))),
        );
        std::fs::write(dir.join(seq.bfile_name()), text)?;
    }
    Ok(())
}
