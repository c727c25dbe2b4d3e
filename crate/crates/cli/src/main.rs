fn main() {
    let out = lds_cli::run(std::env::args_os());
    if out.stderr {
        eprint!("{}", out.text);
    } else {
        println!("{}", out.text);
    }
    std::process::exit(out.code);
}
