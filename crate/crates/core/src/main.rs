fn main() {
    std::process::exit(subspec::cli::main_with(std::env::args_os()));
}
