fn main() {
    let r = polymax::cli::run(std::env::args_os());
    std::process::exit(r.code);
}
