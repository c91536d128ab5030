fn main() {
    std::process::exit(renewal_dst::cli::run(std::env::args_os()));
}
