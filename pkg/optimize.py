import sys
sys.path.append('./src')

import main

sys.exit(main.main())
