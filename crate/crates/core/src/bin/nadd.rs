fn main() -> std::process::ExitCode {
    nadd::cli::main()
}
