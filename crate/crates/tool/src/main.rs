fn main() -> std::process::ExitCode {
    wyd_cli::main()
}
