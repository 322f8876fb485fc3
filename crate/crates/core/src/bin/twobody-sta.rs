fn main() {
    std::process::exit(twobody_sta::cli::main_with_args(std::env::args_os()));
}
