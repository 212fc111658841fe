import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'spinorhelicity.settings')
django.setup()
