//! Drives the command-line interface in-process: build a KZ connection, check
//! it, restrict it to a channel and compute that channel's monodromy.

use treealg::cli::run;

fn step(args: &[&str]) -> i32 {
    println!("$ treealg {}", args.join(" "));
    let code = run(std::iter::once("treealg").chain(args.iter().copied()));
    println!("(exit {code})\n");
    code
}

fn main() {
    let dir = std::env::temp_dir().join("treealg-cli-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let kz = dir.join("kz.json");
    let ch = dir.join("channel.json");
    let (kz, ch) = (kz.to_str().unwrap(), ch.to_str().unwrap());

    step(&["kz", "--algebra", "sl2", "--weights", "1,1,1", "--level", "1", "--out", kz]);
    step(&["check-flat", kz, "--convention", "both"]);
    step(&["restrict", kz, "--output", "1", "--out", ch]);
    step(&["degree", ch]);
    step(&["residue", ch, "--pair", "0,1"]);
    step(&["monodromy", ch, "--pair", "0,1", "--base", "0:0,1:0,3:0.5"]);
}
