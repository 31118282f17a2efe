fn main() {
    std::process::exit(trenchjj::cli::run(std::env::args_os()));
}
