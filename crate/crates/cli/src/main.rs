fn main() {
    std::process::exit(masm_cli::main_with_args(std::env::args_os()));
}
