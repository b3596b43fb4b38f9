from twoprimeadic.cli.main import main


raise SystemExit(main())
