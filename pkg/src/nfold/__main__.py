'''
python -m nfold
'''

import sys

from nfold.cli import main

sys.exit(main())
